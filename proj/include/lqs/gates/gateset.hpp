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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lqs/core/ast.hpp"

namespace lqs {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class GateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense unitary of dimension 2^arity.
class UnitaryMatrix {
public:
    UnitaryMatrix() = default;
    explicit UnitaryMatrix(Matrix m);

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] std::size_t arity() const;
    [[nodiscard]] const Matrix& matrix() const { return m_; }
    [[nodiscard]] UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }

private:
    Matrix m_;
};

/// Matrix dimension of a gate expression; throws GateError when Product or
/// Diag operands disagree.
std::size_t gate_dim(const GatePtr& g);
/// log2 of gate_dim.
std::size_t gate_arity(const GatePtr& g);

Matrix named_matrix(GateName name, std::size_t dim = 2);
UnitaryMatrix mat_of_gate(const GatePtr& g);

bool is_unitary(const Matrix& m, double tol);
/// ‖a - b‖_F.
double frobenius_distance(const Matrix& a, const Matrix& b);
/// min over global phases φ of ‖a - e^{iφ} b‖_F.
double phase_distance(const Matrix& a, const Matrix& b);
bool is_identity_up_to_phase(const Matrix& m, double tol);

/// Kronecker product a ⊗ b with a on the leading qubits.
Matrix kron(const Matrix& a, const Matrix& b);

/// Lifts a k-qubit matrix to an n-qubit one acting on `positions` (big-endian,
/// position 0 is the most significant qubit). `positions[0]` carries the
/// matrix's most significant index bit.
Matrix embed(const Matrix& u, const std::vector<std::size_t>& positions, std::size_t n);

}  // namespace lqs
