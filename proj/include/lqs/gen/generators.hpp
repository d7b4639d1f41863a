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

// Random gate expressions and random well-typed programs for property tests.

#include <cstddef>
#include <random>

#include "lqs/core/ast.hpp"
#include "lqs/core/printer.hpp"

namespace lqs::gen {

using Rng = std::mt19937_64;

/// A gate expression over `arity` qubits whose syntax tree has depth at most
/// `depth` (a named gate has depth 1).
GatePtr random_gate(Rng& rng, std::size_t arity, std::size_t depth);

/// A gate expression of the given arity equal to the identity up to phase:
/// a named identity or a product of a gate with its adjoint.
GatePtr random_identity_gate(Rng& rng, std::size_t arity, std::size_t depth);

enum class ResultShape { Unit, Bool, BoolTuple };

struct ProgramOptions {
    std::size_t max_qubits = 4;   // live at once, context included
    std::size_t max_meas = 4;     // measurement commands in the program text
    std::size_t max_depth = 8;    // sequential actions along any path
    std::size_t gate_depth = 2;
    ResultShape shape = ResultShape::BoolTuple;
    double identity_rate = 0.0;   // chance a gate action is an identity gate
    double fresh_meas_rate = 0.0; // chance of inserting `new a in meas a`
    bool use_sugar = true;        // emit blocks, do, call and proc
    QubitContext context;         // free qubit variables the program may use
};

/// A closed (apart from `context`) well-typed command with a first-order result.
CmdPtr random_program(Rng& rng, const ProgramOptions& opts);

/// A program in which some allocation's reference escapes its scope, either
/// directly in the result or captured by a returned command or function.
CmdPtr random_escaping_program(Rng& rng, const ProgramOptions& opts);

/// Counts named identity gates (I of any dimension) and gates equal to the
/// identity up to phase in gate and diag applications.
std::size_t count_identity_gates(const CmdPtr& m);

/// Counts `new a in meas a` and `new a in {x <- meas a; m}` shapes, after
/// desugaring.
std::size_t count_fresh_measurements(const CmdPtr& m);

}  // namespace lqs::gen
