// Copyright 2026 The lqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Abstract syntax of the core calculus: types, gate expressions, pure
// expressions and effectful commands. Nodes are immutable and shared.
//
// Each sort also carries the derived forms (blocks, do, proc, call, =>) that
// the parser produces; `desugar` removes them. The `Scope` command is the
// runtime form of an allocation whose qubit is live.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lqs/core/symbol.hpp"

namespace lqs {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct Type;
struct Gate;
struct Expr;
struct Cmd;
using TypePtr = std::shared_ptr<const Type>;
using GatePtr = std::shared_ptr<const Gate>;
using ExprPtr = std::shared_ptr<const Expr>;
using CmdPtr = std::shared_ptr<const Cmd>;

// ---------------------------------------------------------------- types

namespace ty {
struct QRef {
    QubitSymbol sym;
};
struct Arrow {
    TypePtr dom;
    TypePtr cod;
};
struct Cmd {
    TypePtr ret;
};
struct Prod {
    std::vector<TypePtr> items;
};
struct Bool {};
struct Unit {};
/// `dom => cod`, shorthand for `dom -> cmd(cod)`.
struct Proc {
    TypePtr dom;
    TypePtr cod;
};
}  // namespace ty

struct Type {
    std::variant<ty::QRef, ty::Arrow, ty::Cmd, ty::Prod, ty::Bool, ty::Unit, ty::Proc> node;
};

// ---------------------------------------------------------------- gates

enum class GateName { I, X, Y, Z, H, S, T, Swap };

namespace gate {
struct Named {
    GateName name;
    std::size_t dim = 2;  // matrix dimension; only varies for I
};
struct Adjoint {
    GatePtr inner;
};
/// outer · inner: `inner` acts first.
struct Product {
    GatePtr outer;
    GatePtr inner;
};
/// high ⊗ low: `high` acts on the leading (most significant) arguments.
struct Tensor {
    GatePtr high;
    GatePtr low;
};
/// zero ⊕ one, controlled by the first argument.
struct Diag {
    GatePtr zero;
    GatePtr one;
};
}  // namespace gate

struct Gate {
    std::variant<gate::Named, gate::Adjoint, gate::Product, gate::Tensor, gate::Diag> node;
};

// ---------------------------------------------------------------- expressions

namespace ex {
struct Var {
    std::string name;
};
struct Let {
    ExprPtr bound;
    std::string binder;
    ExprPtr body;
};
struct Lam {
    std::string binder;
    TypePtr annot;
    ExprPtr body;
};
struct App {
    ExprPtr fn;
    ExprPtr arg;
};
struct Box {
    CmdPtr cmd;
};
struct Tuple {
    std::vector<ExprPtr> items;
};
/// 1-based projection.
struct Proj {
    std::size_t index;
    ExprPtr tuple;
};
struct Bool {
    bool value;
};
struct If {
    ExprPtr cond;
    ExprPtr then_branch;
    ExprPtr else_branch;
};
struct Unit {};
struct QLoc {
    QubitSymbol sym;
};
/// A gate used as a first-class operation; only typeable in function position.
struct GateConst {
    GatePtr gate;
};
/// `proc (x : t) m`, shorthand for `fun (x : t) cmd m`.
struct Proc {
    std::string binder;
    TypePtr annot;
    CmdPtr body;
};
}  // namespace ex

struct Expr {
    std::variant<ex::Var, ex::Let, ex::Lam, ex::App, ex::Box, ex::Tuple, ex::Proj, ex::Bool, ex::If, ex::Unit,
                 ex::QLoc, ex::GateConst, ex::Proc>
        node;
    SourceLoc loc;
};

// ---------------------------------------------------------------- commands

namespace cm {
struct Ret {
    ExprPtr value;
};
struct Bnd {
    ExprPtr boxed;
    std::string binder;
    CmdPtr rest;
};
/// Allocation. `sym`, when present, names the bound qubit so that types in
/// the body may refer to it; it is bound by this node.
struct New {
    std::string binder;
    CmdPtr body;
    std::optional<QubitSymbol> sym;
};
struct GateAp {
    GatePtr gate;
    ExprPtr args;
};
struct DiagAp {
    GatePtr zero;
    GatePtr one;
    ExprPtr control;
    ExprPtr targets;
};
struct Meas {
    ExprPtr target;
};
/// Runtime allocation bracket: `sym` is live for the duration of `body`.
struct Scope {
    QubitSymbol sym;
    CmdPtr body;
};

struct BlockItem {
    std::optional<std::string> binder;  // nullopt for `m;`
    CmdPtr cmd;
};
/// `{x1 <- m1; m2; ...; last}`.
struct Block {
    std::vector<BlockItem> items;
    CmdPtr last;
};
struct Do {
    CmdPtr body;
};
/// `call fn(arg)`; `call fn` when arg is null.
struct Call {
    ExprPtr fn;
    ExprPtr arg;
};
}  // namespace cm

struct Cmd {
    std::variant<cm::Ret, cm::Bnd, cm::New, cm::GateAp, cm::DiagAp, cm::Meas, cm::Scope, cm::Block, cm::Do, cm::Call>
        node;
    SourceLoc loc;
};

/// Either sort of term; file-level parse result.
using Term = std::variant<ExprPtr, CmdPtr>;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// ---------------------------------------------------------------- builders

namespace mk {
TypePtr qref(QubitSymbol s);
TypePtr arrow(TypePtr dom, TypePtr cod);
TypePtr cmd_t(TypePtr ret);
TypePtr prod(std::vector<TypePtr> items);
TypePtr bool_t();
TypePtr unit_t();
TypePtr proc_t(TypePtr dom, TypePtr cod);

GatePtr named(GateName n);
GatePtr identity(std::size_t dim);
GatePtr adjoint(GatePtr g);
GatePtr product(GatePtr outer, GatePtr inner);
GatePtr tensor(GatePtr high, GatePtr low);
GatePtr diag(GatePtr zero, GatePtr one);

ExprPtr var(std::string name, SourceLoc loc = {});
ExprPtr let(ExprPtr bound, std::string binder, ExprPtr body, SourceLoc loc = {});
ExprPtr lam(std::string binder, TypePtr annot, ExprPtr body, SourceLoc loc = {});
ExprPtr app(ExprPtr fn, ExprPtr arg, SourceLoc loc = {});
ExprPtr box(CmdPtr m, SourceLoc loc = {});
ExprPtr tuple(std::vector<ExprPtr> items, SourceLoc loc = {});
ExprPtr proj(std::size_t index, ExprPtr e, SourceLoc loc = {});
ExprPtr boolean(bool v, SourceLoc loc = {});
ExprPtr tt(SourceLoc loc = {});
ExprPtr ff(SourceLoc loc = {});
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e, SourceLoc loc = {});
ExprPtr unit(SourceLoc loc = {});
ExprPtr qloc(QubitSymbol s, SourceLoc loc = {});
ExprPtr gate_const(GatePtr g, SourceLoc loc = {});
ExprPtr proc(std::string binder, TypePtr annot, CmdPtr body, SourceLoc loc = {});

CmdPtr ret(ExprPtr e, SourceLoc loc = {});
CmdPtr bnd(ExprPtr boxed, std::string binder, CmdPtr rest, SourceLoc loc = {});
CmdPtr new_(std::string binder, CmdPtr body, std::optional<QubitSymbol> sym = std::nullopt, SourceLoc loc = {});
CmdPtr gate_ap(GatePtr g, ExprPtr args, SourceLoc loc = {});
CmdPtr diag_ap(GatePtr zero, GatePtr one, ExprPtr control, ExprPtr targets, SourceLoc loc = {});
CmdPtr meas(ExprPtr e, SourceLoc loc = {});
CmdPtr scope(QubitSymbol s, CmdPtr body, SourceLoc loc = {});
CmdPtr block(std::vector<cm::BlockItem> items, CmdPtr last, SourceLoc loc = {});
CmdPtr do_(CmdPtr body, SourceLoc loc = {});
CmdPtr call(ExprPtr fn, ExprPtr arg = nullptr, SourceLoc loc = {});

/// `{m1; m2}`, discarding the result of m1.
CmdPtr seq(CmdPtr first, CmdPtr second);
/// `{x <- m1; m2}`.
CmdPtr bind(std::string binder, CmdPtr first, CmdPtr second);
}  // namespace mk

// ---------------------------------------------------------------- queries

template <class T>
const T* as(const ExprPtr& e) {
    return std::get_if<T>(&e->node);
}
template <class T>
const T* as(const CmdPtr& m) {
    return std::get_if<T>(&m->node);
}
template <class T>
const T* as(const TypePtr& t) {
    return std::get_if<T>(&t->node);
}
template <class T>
const T* as(const GatePtr& g) {
    return std::get_if<T>(&g->node);
}

const char* gate_name_text(GateName n);

}  // namespace lqs
