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

// Elaboration of Q# callables into core-calculus terms.
//
// Every callable becomes one let binding per distinct tuple of qubit symbols
// it is called at (callees first). Callables nobody calls are elaborated once
// at fresh symbols. The resulting term is the let-chain closed by `<>`.

#include <map>
#include <string>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/gates/gateset.hpp"
#include "lqs/qsharp/qs_ast.hpp"

namespace lqs::qs {

struct Instance {
    std::string callable;               // Q# name
    std::string var;                    // let-bound name in the chain
    std::vector<QubitSymbol> symbols;   // symbols at the qubit parameter positions
    ExprPtr value;                      // lambda
    TypePtr type;
};

struct Elaboration {
    ExprPtr term;                      // let-chain ending in <>
    std::vector<Instance> instances;   // chain order
    std::vector<QubitSymbol> free_symbols;
    std::vector<std::string> roots;    // callables no other callable refers to
    std::vector<std::string> namespaces;
    std::vector<std::string> opens;

    /// Instance elaborated at fresh symbols for an uncalled callable,
    /// otherwise the first one emitted. Null when absent.
    [[nodiscard]] const Instance* root(const std::string& callable) const;

    /// `bnd (let f1 = v1 in ... in cmd body) as r in ret r`: runs `body` with
    /// the instances it depends on in scope.
    [[nodiscard]] CmdPtr with_body(const CmdPtr& body) const;
};

Elaboration elaborate(const QsProgram& program);
Elaboration elaborate_source(std::string_view source);

/// Unitary of an operation whose parameters are all qubits, as a gate
/// expression over its parameters in declaration order. Throws
/// NonAdjointable when the unfolded body measures or allocates.
GatePtr mat_gate(const QsProgram& program, const std::string& callable);
UnitaryMatrix mat(const QsProgram& program, const std::string& callable);

/// `g` acting on `positions` of an n-qubit register, written with tensors of
/// identities and SWAP networks.
GatePtr embed_gate(const GatePtr& g, const std::vector<std::size_t>& positions, std::size_t n);

/// Identifier usable as a core variable name.
std::string sanitize_name(const std::string& name);

}  // namespace lqs::qs
