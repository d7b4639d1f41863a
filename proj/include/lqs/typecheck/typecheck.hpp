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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/core/printer.hpp"

namespace lqs {

enum class TypeErrorKind {
    UnboundVar,
    Mismatch,
    NotAFunction,
    NotATuple,
    BadArity,
    AliasedQubits,
    EscapingQubit,
    UnknownSymbol,
    DimensionMismatch,
};

const char* type_error_kind_name(TypeErrorKind k);

class TypeError : public std::runtime_error {
public:
    TypeError(TypeErrorKind kind, SourceLoc loc, const std::string& detail)
        : std::runtime_error(detail), kind_(kind), loc_(loc) {}
    [[nodiscard]] TypeErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] SourceLoc loc() const noexcept { return loc_; }

private:
    TypeErrorKind kind_;
    SourceLoc loc_;
};

/// Ordered set of active qubit symbols.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<QubitSymbol> syms);

    [[nodiscard]] bool contains(const QubitSymbol& q) const;
    /// Σ,q; throws std::logic_error when q is already present.
    [[nodiscard]] Signature extended(const QubitSymbol& q) const;
    [[nodiscard]] Signature without(const QubitSymbol& q) const;
    [[nodiscard]] const std::vector<QubitSymbol>& symbols() const { return syms_; }
    [[nodiscard]] std::size_t size() const { return syms_.size(); }

private:
    std::vector<QubitSymbol> syms_;
};

/// Γ: innermost binding wins.
class TypingContext {
public:
    TypingContext() = default;
    [[nodiscard]] TypingContext extended(std::string name, TypePtr t) const;
    [[nodiscard]] TypePtr lookup(const std::string& name) const;  // null when unbound
    [[nodiscard]] const std::vector<std::pair<std::string, TypePtr>>& bindings() const { return bindings_; }

private:
    std::vector<std::pair<std::string, TypePtr>> bindings_;
};

TypePtr infer_expr(const TypingContext& gamma, const Signature& sigma, const ExprPtr& e);
TypePtr infer_cmd(const TypingContext& gamma, const Signature& sigma, const CmdPtr& m);

/// Throws AliasedQubits naming the first repeated symbol.
void check_distinct_refs(const std::vector<TypePtr>& refs, SourceLoc loc = {});

bool type_wf(const Signature& sigma, const TypePtr& t);

/// Type equality modulo singleton-tuple equivalence (prod(t) ≡ t) and `=>`.
bool types_equivalent(const TypePtr& a, const TypePtr& b);

/// Unwraps singleton products.
TypePtr strip_singletons(const TypePtr& t);

/// True when the type mentions an arrow or a command type.
bool is_higher_order(const TypePtr& t);

/// Γ and Σ for a program whose header declares `ctx`: each variable gets its
/// qref type and every context symbol is active. Symbols mentioned only in
/// binder annotations are added to Σ as well.
std::pair<TypingContext, Signature> program_environment(const QubitContext& ctx, const Term& t);

/// Infers the type of a whole program under `program_environment`.
TypePtr check_program(const QubitContext& ctx, const Term& t);

struct GateSite {
    SourceLoc loc;
    std::vector<QubitSymbol> refs;  // control first for diag applications
};

/// Typechecks like check_program and also returns the reference symbols at
/// every gate and diag application reached by the derivation.
std::vector<GateSite> gate_sites(const QubitContext& ctx, const Term& t);

}  // namespace lqs
