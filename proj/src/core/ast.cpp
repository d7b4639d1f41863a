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

#include "lqs/core/ast.hpp"

#include <atomic>

namespace lqs {

namespace {
std::atomic<std::uint64_t> g_next_symbol{1};
std::atomic<std::uint64_t> g_next_var{1};

template <class T>
TypePtr ty_node(T v) {
    return std::make_shared<const Type>(Type{std::move(v)});
}
template <class T>
GatePtr gate_node(T v) {
    return std::make_shared<const Gate>(Gate{std::move(v)});
}
template <class T>
ExprPtr expr_node(T v, SourceLoc loc) {
    return std::make_shared<const Expr>(Expr{std::move(v), loc});
}
template <class T>
CmdPtr cmd_node(T v, SourceLoc loc) {
    return std::make_shared<const Cmd>(Cmd{std::move(v), loc});
}
}  // namespace

QubitSymbol QubitSymbol::fresh(std::string_view display_name) {
    return QubitSymbol(g_next_symbol.fetch_add(1, std::memory_order_relaxed), std::string(display_name));
}

std::string fresh_var_name(std::string_view base) {
    std::string root(base);
    if (auto p = root.find('\''); p != std::string::npos) root.resize(p);
    if (root.empty() || root == "_") root = "x";
    return root + "'" + std::to_string(g_next_var.fetch_add(1, std::memory_order_relaxed));
}

const char* gate_name_text(GateName n) {
    switch (n) {
        case GateName::I: return "I";
        case GateName::X: return "X";
        case GateName::Y: return "Y";
        case GateName::Z: return "Z";
        case GateName::H: return "H";
        case GateName::S: return "S";
        case GateName::T: return "T";
        case GateName::Swap: return "SWAP";
    }
    return "?";
}

namespace mk {

TypePtr qref(QubitSymbol s) { return ty_node(ty::QRef{std::move(s)}); }
TypePtr arrow(TypePtr dom, TypePtr cod) { return ty_node(ty::Arrow{std::move(dom), std::move(cod)}); }
TypePtr cmd_t(TypePtr ret) { return ty_node(ty::Cmd{std::move(ret)}); }
TypePtr prod(std::vector<TypePtr> items) { return ty_node(ty::Prod{std::move(items)}); }
TypePtr bool_t() {
    static const TypePtr t = ty_node(ty::Bool{});
    return t;
}
TypePtr unit_t() {
    static const TypePtr t = ty_node(ty::Unit{});
    return t;
}
TypePtr proc_t(TypePtr dom, TypePtr cod) { return ty_node(ty::Proc{std::move(dom), std::move(cod)}); }

GatePtr named(GateName n) { return gate_node(gate::Named{n, n == GateName::Swap ? 4u : 2u}); }
GatePtr identity(std::size_t dim) { return gate_node(gate::Named{GateName::I, dim}); }
GatePtr adjoint(GatePtr g) { return gate_node(gate::Adjoint{std::move(g)}); }
GatePtr product(GatePtr outer, GatePtr inner) { return gate_node(gate::Product{std::move(outer), std::move(inner)}); }
GatePtr tensor(GatePtr high, GatePtr low) { return gate_node(gate::Tensor{std::move(high), std::move(low)}); }
GatePtr diag(GatePtr zero, GatePtr one) { return gate_node(gate::Diag{std::move(zero), std::move(one)}); }

ExprPtr var(std::string name, SourceLoc loc) { return expr_node(ex::Var{std::move(name)}, loc); }
ExprPtr let(ExprPtr bound, std::string binder, ExprPtr body, SourceLoc loc) {
    return expr_node(ex::Let{std::move(bound), std::move(binder), std::move(body)}, loc);
}
ExprPtr lam(std::string binder, TypePtr annot, ExprPtr body, SourceLoc loc) {
    return expr_node(ex::Lam{std::move(binder), std::move(annot), std::move(body)}, loc);
}
ExprPtr app(ExprPtr fn, ExprPtr arg, SourceLoc loc) { return expr_node(ex::App{std::move(fn), std::move(arg)}, loc); }
ExprPtr box(CmdPtr m, SourceLoc loc) { return expr_node(ex::Box{std::move(m)}, loc); }
ExprPtr tuple(std::vector<ExprPtr> items, SourceLoc loc) { return expr_node(ex::Tuple{std::move(items)}, loc); }
ExprPtr proj(std::size_t index, ExprPtr e, SourceLoc loc) { return expr_node(ex::Proj{index, std::move(e)}, loc); }
ExprPtr boolean(bool v, SourceLoc loc) { return expr_node(ex::Bool{v}, loc); }
ExprPtr tt(SourceLoc loc) { return boolean(true, loc); }
ExprPtr ff(SourceLoc loc) { return boolean(false, loc); }
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e, SourceLoc loc) {
    return expr_node(ex::If{std::move(c), std::move(t), std::move(e)}, loc);
}
ExprPtr unit(SourceLoc loc) { return expr_node(ex::Unit{}, loc); }
ExprPtr qloc(QubitSymbol s, SourceLoc loc) { return expr_node(ex::QLoc{std::move(s)}, loc); }
ExprPtr gate_const(GatePtr g, SourceLoc loc) { return expr_node(ex::GateConst{std::move(g)}, loc); }
ExprPtr proc(std::string binder, TypePtr annot, CmdPtr body, SourceLoc loc) {
    return expr_node(ex::Proc{std::move(binder), std::move(annot), std::move(body)}, loc);
}

CmdPtr ret(ExprPtr e, SourceLoc loc) { return cmd_node(cm::Ret{std::move(e)}, loc); }
CmdPtr bnd(ExprPtr boxed, std::string binder, CmdPtr rest, SourceLoc loc) {
    return cmd_node(cm::Bnd{std::move(boxed), std::move(binder), std::move(rest)}, loc);
}
CmdPtr new_(std::string binder, CmdPtr body, std::optional<QubitSymbol> sym, SourceLoc loc) {
    return cmd_node(cm::New{std::move(binder), std::move(body), std::move(sym)}, loc);
}
CmdPtr gate_ap(GatePtr g, ExprPtr args, SourceLoc loc) { return cmd_node(cm::GateAp{std::move(g), std::move(args)}, loc); }
CmdPtr diag_ap(GatePtr zero, GatePtr one, ExprPtr control, ExprPtr targets, SourceLoc loc) {
    return cmd_node(cm::DiagAp{std::move(zero), std::move(one), std::move(control), std::move(targets)}, loc);
}
CmdPtr meas(ExprPtr e, SourceLoc loc) { return cmd_node(cm::Meas{std::move(e)}, loc); }
CmdPtr scope(QubitSymbol s, CmdPtr body, SourceLoc loc) { return cmd_node(cm::Scope{std::move(s), std::move(body)}, loc); }
CmdPtr block(std::vector<cm::BlockItem> items, CmdPtr last, SourceLoc loc) {
    return cmd_node(cm::Block{std::move(items), std::move(last)}, loc);
}
CmdPtr do_(CmdPtr body, SourceLoc loc) { return cmd_node(cm::Do{std::move(body)}, loc); }
CmdPtr call(ExprPtr fn, ExprPtr arg, SourceLoc loc) { return cmd_node(cm::Call{std::move(fn), std::move(arg)}, loc); }

CmdPtr seq(CmdPtr first, CmdPtr second) { return bnd(box(std::move(first)), "_", std::move(second)); }
CmdPtr bind(std::string binder, CmdPtr first, CmdPtr second) {
    return bnd(box(std::move(first)), std::move(binder), std::move(second));
}

}  // namespace mk
}  // namespace lqs
