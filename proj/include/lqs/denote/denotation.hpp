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

// Instrument semantics of closed commands, by exhaustive branching on
// measurements. The Choi matrix of a branch over k free qubits is
//
//     J = sum_ij |i><j| (x) Phi(|i><j|)
//
// indexed (reference, output) with the reference qubits most significant.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/gates/gateset.hpp"

namespace lqs {

class DenotationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DenoteOptions {
    std::size_t max_branches = std::size_t{1} << 16;
    std::size_t max_qubits = 10;  // free qubits counted twice, plus allocations
    std::size_t step_limit = 1'000'000;
    double drop_below = 1e-13;    // paths whose weight falls below this are discarded
    bool typecheck = true;
};

struct Instrument {
    std::size_t free_qubits = 0;
    std::map<std::string, Matrix> branches;  // outcome key -> Choi matrix

    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << free_qubits; }
    /// Phi_key(rho); zero when the outcome is absent.
    [[nodiscard]] Matrix apply(const std::string& key, const Matrix& rho) const;
    [[nodiscard]] double probability(const std::string& key, const Matrix& rho) const;
    /// Probabilities on the all-zero input state.
    [[nodiscard]] std::map<std::string, double> distribution() const;
};

/// Denotation of `m` whose free qubits are the locations `free`.
Instrument denote(const std::vector<QubitSymbol>& free, const CmdPtr& m, const DenoteOptions& opts = {});
/// Denotation of a program whose context variables stand for its free qubits.
Instrument denote(const QubitContext& ctx, const CmdPtr& m, const DenoteOptions& opts = {});

struct EquivReport {
    bool equivalent = false;
    double max_deviation = 0.0;
    std::vector<std::string> unmatched;  // outcomes present on one side only
};

/// Compares keysets after dropping branches of Frobenius norm <= tol, then the
/// Choi matrices of matching branches.
EquivReport equiv(const Instrument& a, const Instrument& b, double tol = 1e-9);
EquivReport equiv(const QubitContext& ctx, const CmdPtr& m1, const CmdPtr& m2, double tol = 1e-9,
                  const DenoteOptions& opts = {});

struct CptpReport {
    bool ok = false;
    double min_eigenvalue = 0.0;  // over all branches
    double hermitian_deviation = 0.0;
    double trace_deviation = 0.0;  // ||Tr_out(sum J) - I||_F
};

CptpReport check_cptp(const Instrument& inst, double tol = 1e-9);
inline bool is_cptp(const Instrument& inst, double tol = 1e-9) { return check_cptp(inst, tol).ok; }

/// JSON text: free qubit count, then each branch key with its Choi entries as
/// [re, im] pairs in row-major order.
std::string serialize(const Instrument& inst);
Instrument deserialize(const std::string& text);

}  // namespace lqs
