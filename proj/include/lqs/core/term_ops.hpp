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

#include <set>
#include <string>
#include <string_view>

#include "lqs/core/ast.hpp"

namespace lqs {

using SymbolSet = std::set<QubitSymbol>;

std::set<std::string> free_vars(const ExprPtr& e);
std::set<std::string> free_vars(const CmdPtr& m);

/// Symbols mentioned by the term (in types, qloc values and allocation
/// annotations) that are not bound by an enclosing `New`/`Scope`.
SymbolSet free_qubit_symbols(const ExprPtr& e);
SymbolSet free_qubit_symbols(const CmdPtr& m);
SymbolSet free_qubit_symbols(const TypePtr& t);
SymbolSet free_qubit_symbols(const Term& t);

/// Capture-avoiding substitution [value/x]into. Returns `into` itself when x
/// does not occur free.
ExprPtr subst(const ExprPtr& value, std::string_view x, const ExprPtr& into);
CmdPtr subst(const ExprPtr& value, std::string_view x, const CmdPtr& into);
Term subst(const ExprPtr& value, std::string_view x, const Term& into);

/// Replaces free occurrences of qubit symbol `from` by `to`.
ExprPtr rename_symbol(const ExprPtr& e, const QubitSymbol& from, const QubitSymbol& to);
CmdPtr rename_symbol(const CmdPtr& m, const QubitSymbol& from, const QubitSymbol& to);
TypePtr rename_symbol(const TypePtr& t, const QubitSymbol& from, const QubitSymbol& to);

/// Equality up to consistent renaming of bound variables and bound qubit
/// symbols. Free variables and free symbols must coincide.
bool alpha_eq(const ExprPtr& a, const ExprPtr& b);
bool alpha_eq(const CmdPtr& a, const CmdPtr& b);
bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const TypePtr& a, const TypePtr& b);

/// alpha_eq after some bijective renaming of the free qubit symbols of `a`
/// onto those of `b`. Tries every bijection; meant for small terms.
bool alpha_eq_modulo_symbols(const Term& a, const Term& b);

/// Exact structural equality, binder names included.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
bool structurally_equal(const CmdPtr& a, const CmdPtr& b);
bool structurally_equal(const Term& a, const Term& b);

bool gate_equal(const GatePtr& a, const GatePtr& b);

/// Closed value forms: lambdas, boxed commands, qloc, booleans, unit, gate
/// constants and tuples of values.
bool is_value(const ExprPtr& e);

/// Number of nodes, used for budgets and generators.
std::size_t term_size(const ExprPtr& e);
std::size_t term_size(const CmdPtr& m);

}  // namespace lqs
