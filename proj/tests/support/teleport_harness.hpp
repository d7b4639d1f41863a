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

#include <fstream>
#include <sstream>
#include <string>

#include "lqs/denote/denotation.hpp"
#include "lqs/interp/store.hpp"
#include "lqs/qsharp/frontend.hpp"

namespace lqs::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Prepares R|0> on the message qubit, runs Teleport, and returns the
/// fidelity of Bob's qubit with R|0>.
inline double teleport_fidelity(const qs::Elaboration& elab, const GatePtr& r) {
    const qs::Instance* t = elab.root("Teleport");
    if (!t || t->symbols.size() != 3) throw std::runtime_error("no Teleport instance");
    QubitContext ctx{{"alice", t->symbols[0]}, {"bob", t->symbols[1]}, {"msg", t->symbols[2]}};
    auto body = mk::seq(mk::gate_ap(r, mk::var("msg")),
                        mk::call(mk::var(t->var), mk::tuple({mk::var("alice"), mk::var("bob"), mk::var("msg")})));
    Instrument inst = denote(ctx, elab.with_body(body));
    Matrix rho0 = Matrix::Zero(8, 8);
    rho0(0, 0) = 1.0;
    Matrix out = Matrix::Zero(8, 8);
    for (const auto& [key, j] : inst.branches) out += inst.apply(key, rho0);
    Matrix bob = partial_trace(out, 3, {0, 2});
    Eigen::VectorXcd psi = mat_of_gate(r).matrix().col(0);
    return (psi.adjoint() * bob * psi)(0, 0).real();
}

}  // namespace lqs::testing
