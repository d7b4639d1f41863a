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

// Equational axioms as instantiable schemas, checked against the instrument
// semantics, and a directed simplifier built from the same equations.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/gen/generators.hpp"

namespace lqs {

enum class AxiomId { A, B, D, E, F, G, H, I, J, K, L };

class AxiomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<AxiomId>& all_axioms();
char axiom_letter(AxiomId id);
std::optional<AxiomId> parse_axiom_id(std::string_view text);
/// One-line statement in concrete syntax.
const char* axiom_statement(AxiomId id);

/// Schema parameters. Which fields are used depends on the axiom:
///   B, E: u, v over n qubits.   G: n.   H: u, v over n qubits.
///   I: u over m qubits, v over n qubits.
///   F: m1, m2.   J, K, L: m1.
/// The commands may mention the schema's qubit variables (a, b, c) and, for
/// J and L, the measured booleans (x, y and y respectively). Their qubit
/// symbols are `syms`, in the order a, b, c.
struct AxiomParams {
    GatePtr u;
    GatePtr v;
    std::size_t n = 1;
    std::size_t m = 1;
    CmdPtr m1;
    CmdPtr m2;
    std::vector<QubitSymbol> syms;
};

struct AxiomInstance {
    AxiomId id;
    QubitContext context;  // free qubit variables of both sides
    CmdPtr lhs;
    CmdPtr rhs;
    /// Context variables whose final state is not observed: the sides are
    /// compared after resetting them (measure, then X on outcome tt).
    std::vector<std::string> discarded;
};

/// `{x <- m; reset v1; ...; ret x}` for the given qubit variables.
CmdPtr with_reset(const CmdPtr& m, const std::vector<std::string>& vars);

AxiomInstance instantiate(AxiomId id, const AxiomParams& params);
AxiomParams random_params(AxiomId id, gen::Rng& rng);

struct AxiomCheck {
    bool passed = false;
    double deviation = 0.0;
};

AxiomCheck check_axiom(AxiomId id, const AxiomParams& params, double tol = 1e-9, const DenoteOptions& opts = {});

struct AxiomSuiteResult {
    AxiomId id;
    std::size_t trials = 0;
    std::size_t passed = 0;
    double max_deviation = 0.0;
    std::string first_failure;  // printed instance, empty when all pass
};

/// `trials` random parameterizations of one schema, seeded deterministically.
AxiomSuiteResult check_axiom_suite(AxiomId id, std::size_t trials, std::uint64_t seed, double tol = 1e-9,
                                   const DenoteOptions& opts = {});

// ---------------------------------------------------------------- simplify

struct SimplifyOptions {
    std::size_t budget = 100'000;  // rewrite steps
    double tol = 1e-9;             // identity-up-to-phase threshold
    // With all three off only the pure and monad-law reductions remain,
    // which unfolds a program without touching its gates or measurements.
    bool gate_rules = true;         // identity deletion and fusion
    bool fold_measurements = true;  // measure-of-fresh folding
    bool drop_allocations = true;   // unused allocations
};

struct SimplifyResult {
    CmdPtr cmd;
    bool budget_exceeded = false;  // cmd is then the input, unchanged
    std::size_t rewrites = 0;
};

/// Rewrites to a fixpoint: beta and let reduction, projections and
/// conditionals on known values, monad laws, deletion of identity gates,
/// fusion of adjacent gates on the same references, and folding of
/// measurements of freshly allocated qubits. The result is in core form.
SimplifyResult simplify(const CmdPtr& m, const SimplifyOptions& opts = {});

}  // namespace lqs
