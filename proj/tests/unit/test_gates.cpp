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

#include <doctest.h>

#include "lqs/core/parser.hpp"
#include "lqs/gates/gateset.hpp"
#include "lqs/gen/generators.hpp"

using namespace lqs;

namespace {

Matrix m2(cplx a, cplx b, cplx c, cplx d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix mat(const char* src) { return mat_of_gate(parse_gate(src)).matrix(); }

const cplx i1{0.0, 1.0};

}  // namespace

TEST_CASE("named matrices") {
    double r = 1.0 / std::sqrt(2.0);
    CHECK(frobenius_distance(mat("X"), m2(0, 1, 1, 0)) < 1e-15);
    CHECK(frobenius_distance(mat("Y"), m2(0, -i1, i1, 0)) < 1e-15);
    CHECK(frobenius_distance(mat("Z"), m2(1, 0, 0, -1)) < 1e-15);
    CHECK(frobenius_distance(mat("H"), m2(r, r, r, -r)) < 1e-15);
    CHECK(frobenius_distance(mat("S"), m2(1, 0, 0, i1)) < 1e-15);
    CHECK(frobenius_distance(mat("T"), m2(1, 0, 0, std::polar(1.0, M_PI / 4))) < 1e-15);
    CHECK(frobenius_distance(mat("I8"), Matrix::Identity(8, 8)) < 1e-15);
}

TEST_CASE("adjoint of S") {
    CHECK(frobenius_distance(mat("adj(S)"), m2(1, 0, 0, -i1)) < 1e-15);
    CHECK(frobenius_distance(mat("prod(S, S)"), mat("Z")) < 1e-15);
    CHECK(frobenius_distance(mat("prod(T, T)"), mat("S")) < 1e-15);
}

TEST_CASE("product order: inner acts first") {
    // H then S, as a matrix S·H.
    Matrix expect = mat("S") * mat("H");
    CHECK(frobenius_distance(mat("prod(S, H)"), expect) < 1e-15);
    CHECK(frobenius_distance(mat("prod(H, S)"), expect) > 0.1);
}

TEST_CASE("tensor is big-endian") {
    Matrix xi = mat("tensor(X, I)");
    // X on the high qubit maps |00> to |10>, index 0 -> 2.
    CHECK(std::abs(xi(2, 0) - 1.0) < 1e-15);
    CHECK(frobenius_distance(xi, kron(mat("X"), Matrix::Identity(2, 2))) < 1e-15);
}

TEST_CASE("diag is a controlled gate") {
    Matrix cnot = mat("diag(I, X)");
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = 1;
    expect(2, 3) = expect(3, 2) = 1;
    CHECK(frobenius_distance(cnot, expect) < 1e-15);
    CHECK(frobenius_distance(mat("CNOT"), expect) < 1e-15);
}

TEST_CASE("swap") {
    Matrix s = mat("SWAP");
    CHECK(std::abs(s(1, 2) - 1.0) < 1e-15);
    CHECK(std::abs(s(2, 1) - 1.0) < 1e-15);
    CHECK(frobenius_distance(s * s, Matrix::Identity(4, 4)) < 1e-15);
    // SWAP = CNOT · CNOT' · CNOT
    Matrix c01 = mat("CNOT");
    Matrix c10 = mat("SWAP") * c01 * mat("SWAP");
    CHECK(frobenius_distance(c01 * c10 * c01, s) < 1e-14);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(gate_dim(parse_gate("prod(X, SWAP)")), GateError);
    CHECK_THROWS_AS(gate_dim(parse_gate("diag(X, SWAP)")), GateError);
    CHECK(gate_dim(parse_gate("diag(X, H)")) == 4);
    CHECK(gate_arity(parse_gate("tensor(SWAP, diag(X, H))")) == 4);
}

TEST_CASE("embed matches kron for contiguous targets") {
    Matrix h = mat("H");
    Matrix e = embed(h, {1}, 3);
    Matrix id2 = Matrix::Identity(2, 2);
    CHECK(frobenius_distance(e, kron(kron(id2, h), id2)) < 1e-15);
    Matrix cx = mat("CNOT");
    // Reversed order: control on position 1, target on position 0.
    Matrix rev = embed(cx, {1, 0}, 2);
    CHECK(frobenius_distance(rev, mat("SWAP") * cx * mat("SWAP")) < 1e-15);
}

TEST_CASE("phase distance ignores global phase") {
    Matrix z = mat("Z");
    CHECK(phase_distance(z, z * std::polar(1.0, 0.7)) < 1e-12);
    CHECK(phase_distance(z, mat("X")) > 1.0);
    CHECK(is_identity_up_to_phase(mat("prod(S, adj(S))"), 1e-12));
    CHECK(is_identity_up_to_phase(mat("diag(prod(Y, Y), prod(H, H))"), 1e-12));
    CHECK_FALSE(is_identity_up_to_phase(mat("diag(Z, prod(X, prod(Z, X)))"), 1e-12));
    CHECK_FALSE(is_identity_up_to_phase(mat("diag(I, Z)"), 1e-12));
}

TEST_CASE("random gates are unitary and algebraic laws hold") {
    gen::Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k = 1 + trial % 3;
        auto a = gen::random_gate(rng, k, 4);
        auto b = gen::random_gate(rng, k, 4);
        auto c = gen::random_gate(rng, k, 4);
        Matrix ma = mat_of_gate(a).matrix();
        REQUIRE(gate_arity(a) == k);
        CHECK(is_unitary(ma, 1e-12));
        Matrix lhs = mat_of_gate(mk::product(mk::product(a, b), c)).matrix();
        Matrix rhs = mat_of_gate(mk::product(a, mk::product(b, c))).matrix();
        CHECK(frobenius_distance(lhs, rhs) < 1e-12);
        Matrix adj_prod = mat_of_gate(mk::adjoint(mk::product(a, b))).matrix();
        Matrix prod_adj = mat_of_gate(mk::product(mk::adjoint(b), mk::adjoint(a))).matrix();
        CHECK(frobenius_distance(adj_prod, prod_adj) < 1e-12);
        CHECK(is_identity_up_to_phase(mat_of_gate(gen::random_identity_gate(rng, k, 5)).matrix(), 1e-12));
    }
}
