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

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lqs/core/symbol.hpp"
#include "lqs/gates/gateset.hpp"

namespace lqs {

enum class SimMode { Density, Statevector };

const char* sim_mode_name(SimMode m);

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quantum memory: the allocation stack of live symbols and a dense density
/// matrix or statevector over the physical qubits. Physical order is
/// allocation order; the first qubit is the most significant index bit.
///
/// In density mode releasing a qubit traces it out. In statevector mode the
/// qubit is removed from `live()` but keeps its physical slot until the store
/// is dropped.
///
/// States are not renormalised implicitly: `project` leaves the unnormalised
/// branch, so the store can also carry sub-normalised and Choi states.
class QuantumStore {
public:
    explicit QuantumStore(SimMode mode = SimMode::Density, std::size_t max_qubits = 12);

    /// Density store over `syms` holding `rho` (dimension 2^|syms|).
    static QuantumStore from_density(std::vector<QubitSymbol> syms, const Matrix& rho, std::size_t max_qubits = 12);

    [[nodiscard]] SimMode mode() const { return mode_; }
    [[nodiscard]] const std::vector<QubitSymbol>& live() const { return live_; }
    [[nodiscard]] bool is_live(const QubitSymbol& q) const;
    [[nodiscard]] std::size_t physical_qubits() const { return slots_.size(); }
    [[nodiscard]] std::size_t max_qubits() const { return max_qubits_; }

    void allocate(const QubitSymbol& q);
    void release(const QubitSymbol& q);

    /// Applies u with its most significant index bit on targets[0].
    void apply(const Matrix& u, const std::vector<QubitSymbol>& targets);

    /// Unnormalised weight of measuring `outcome` on q.
    [[nodiscard]] double weight(const QubitSymbol& q, bool outcome) const;
    void project(const QubitSymbol& q, bool outcome);
    /// Trace (density) or squared norm (statevector).
    [[nodiscard]] double trace() const;
    void normalize();

    /// Density matrix over the physical qubits.
    [[nodiscard]] Matrix density() const;
    /// Reduced density matrix on `keep`, in the given order.
    [[nodiscard]] Matrix reduced_density(const std::vector<QubitSymbol>& keep) const;

    [[nodiscard]] const std::vector<cplx>& raw() const { return data_; }

private:
    [[nodiscard]] std::size_t position(const QubitSymbol& q) const;
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << slots_.size(); }

    SimMode mode_;
    std::size_t max_qubits_;
    std::vector<QubitSymbol> slots_;
    std::vector<QubitSymbol> live_;
    std::vector<cplx> data_;
};

/// Partial trace of a density matrix over the qubits at `positions` of an
/// n-qubit system.
Matrix partial_trace(const Matrix& rho, std::size_t n, const std::vector<std::size_t>& positions);

}  // namespace lqs
