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

#include "lqs/gates/gateset.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace lqs {

namespace {

std::size_t log2_exact(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) throw GateError("dimension " + std::to_string(dim) + " is not a power of two");
    std::size_t k = 0;
    while ((std::size_t{1} << k) < dim) ++k;
    return k;
}

}  // namespace

UnitaryMatrix::UnitaryMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw GateError("unitary must be square");
    log2_exact(static_cast<std::size_t>(m_.rows()));
}

std::size_t UnitaryMatrix::arity() const { return log2_exact(dim()); }

std::size_t gate_dim(const GatePtr& g) {
    return std::visit(overloaded{
                          [](const gate::Named& n) -> std::size_t {
                              if (n.name == GateName::I) {
                                  log2_exact(n.dim);
                                  return n.dim;
                              }
                              return n.name == GateName::Swap ? 4 : 2;
                          },
                          [](const gate::Adjoint& n) { return gate_dim(n.inner); },
                          [](const gate::Product& n) {
                              auto a = gate_dim(n.outer);
                              auto b = gate_dim(n.inner);
                              if (a != b)
                                  throw GateError("product of gates with dimensions " + std::to_string(a) + " and " +
                                                  std::to_string(b));
                              return a;
                          },
                          [](const gate::Tensor& n) { return gate_dim(n.high) * gate_dim(n.low); },
                          [](const gate::Diag& n) {
                              auto a = gate_dim(n.zero);
                              auto b = gate_dim(n.one);
                              if (a != b)
                                  throw GateError("block diagonal of gates with dimensions " + std::to_string(a) +
                                                  " and " + std::to_string(b));
                              return 2 * a;
                          },
                      },
                      g->node);
}

std::size_t gate_arity(const GatePtr& g) { return log2_exact(gate_dim(g)); }

Matrix named_matrix(GateName name, std::size_t dim) {
    const cplx i(0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    switch (name) {
        case GateName::I: return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        case GateName::X: m << 0, 1, 1, 0; return m;
        case GateName::Y: m << 0, -i, i, 0; return m;
        case GateName::Z: m << 1, 0, 0, -1; return m;
        case GateName::H: m << r, r, r, -r; return m;
        case GateName::S: m << 1, 0, 0, i; return m;
        case GateName::T: m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4); return m;
        case GateName::Swap: {
            Matrix s = Matrix::Zero(4, 4);
            s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
            return s;
        }
    }
    throw GateError("unknown gate");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

UnitaryMatrix mat_of_gate(const GatePtr& g) {
    gate_dim(g);
    std::function<Matrix(const GatePtr&)> go = [&](const GatePtr& h) -> Matrix {
        return std::visit(overloaded{
                              [](const gate::Named& n) { return named_matrix(n.name, n.dim); },
                              [&](const gate::Adjoint& n) -> Matrix { return go(n.inner).adjoint(); },
                              [&](const gate::Product& n) -> Matrix { return go(n.outer) * go(n.inner); },
                              [&](const gate::Tensor& n) { return kron(go(n.high), go(n.low)); },
                              [&](const gate::Diag& n) {
                                  Matrix u = go(n.zero);
                                  Matrix v = go(n.one);
                                  auto d = u.rows();
                                  Matrix out = Matrix::Zero(2 * d, 2 * d);
                                  out.topLeftCorner(d, d) = u;
                                  out.bottomRightCorner(d, d) = v;
                                  return out;
                              },
                          },
                          h->node);
    };
    return UnitaryMatrix(go(g));
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m * m.adjoint() - Matrix::Identity(m.rows(), m.cols())).norm() <= tol;
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

double phase_distance(const Matrix& a, const Matrix& b) {
    // ‖a - e^{iφ}b‖² = ‖a‖² + ‖b‖² - 2 Re(e^{iφ} tr(a† b)), minimised at |tr(a† b)|.
    cplx overlap = (a.adjoint() * b).trace();
    double d2 = a.squaredNorm() + b.squaredNorm() - 2.0 * std::abs(overlap);
    return std::sqrt(std::max(0.0, d2));
}

bool is_identity_up_to_phase(const Matrix& m, double tol) {
    return phase_distance(m, Matrix::Identity(m.rows(), m.cols())) <= tol;
}

Matrix embed(const Matrix& u, const std::vector<std::size_t>& positions, std::size_t n) {
    const std::size_t k = positions.size();
    const std::size_t full = std::size_t{1} << n;
    if (static_cast<std::size_t>(u.rows()) != (std::size_t{1} << k)) throw GateError("embed: arity mismatch");
    std::vector<std::size_t> bit(k);
    std::size_t mask = 0;
    for (std::size_t t = 0; t < k; ++t) {
        if (positions[t] >= n) throw GateError("embed: position out of range");
        bit[t] = std::size_t{1} << (n - 1 - positions[t]);
        if (mask & bit[t]) throw GateError("embed: repeated position");
        mask |= bit[t];
    }
    auto local = [&](std::size_t idx) {
        std::size_t l = 0;
        for (std::size_t t = 0; t < k; ++t) l = (l << 1) | ((idx & bit[t]) ? 1u : 0u);
        return l;
    };
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(full));
    for (std::size_t col = 0; col < full; ++col) {
        std::size_t rest = col & ~mask;
        std::size_t lc = local(col);
        for (std::size_t lr = 0; lr < (std::size_t{1} << k); ++lr) {
            cplx v = u(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
            if (v == cplx(0)) continue;
            std::size_t row = rest;
            for (std::size_t t = 0; t < k; ++t)
                if (lr & (std::size_t{1} << (k - 1 - t))) row |= bit[t];
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
        }
    }
    return out;
}

}  // namespace lqs
