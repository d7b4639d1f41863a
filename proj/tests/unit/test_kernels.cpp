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

#include <random>
#include <vector>

#include "lqs/gates/gateset.hpp"
#include "lqs/gen/generators.hpp"
#include "lqs/kernels/kernels.hpp"

using namespace lqs;
using kernels::KernelTable;

namespace {

std::vector<cplx> random_state(std::mt19937_64& rng, unsigned n) {
    std::normal_distribution<double> g;
    std::vector<cplx> s(std::size_t{1} << n);
    for (auto& a : s) a = {g(rng), g(rng)};
    return s;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Row-major copy for the kernel interface.
std::vector<cplx> row_major(const Matrix& m) {
    std::vector<cplx> out(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
    return out;
}

std::vector<unsigned> random_targets(std::mt19937_64& rng, unsigned n, unsigned k) {
    std::vector<unsigned> idx(n);
    for (unsigned i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(k);
    return idx;
}

void check_against_embed(const KernelTable& kt) {
    gen::Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        unsigned n = 1 + trial % 6;
        unsigned k = 1 + static_cast<unsigned>(rng() % std::min(n, 3u));
        auto targets = random_targets(rng, n, k);
        Matrix u = mat_of_gate(gen::random_gate(rng, k, 3)).matrix();
        auto s = random_state(rng, n);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
        std::vector<std::size_t> pos(targets.begin(), targets.end());
        Eigen::VectorXcd expect = embed(u, pos, n) * v;
        auto um = row_major(u);
        kernels::apply(kt, s.data(), n, targets.data(), k, um.data());
        double d = 0;
        for (std::size_t i = 0; i < s.size(); ++i) d = std::max(d, std::abs(s[i] - expect(static_cast<Eigen::Index>(i))));
        CHECK(d < 1e-12);
    }
}

}  // namespace

TEST_CASE("scalar kernels agree with embedded matrices") { check_against_embed(kernels::scalar_kernels()); }

TEST_CASE("avx2 kernels agree with embedded matrices") {
    const KernelTable* avx = kernels::avx2_kernels();
    if (!avx) {
        MESSAGE("AVX2 kernels unavailable on this machine");
        return;
    }
    check_against_embed(*avx);
}

TEST_CASE("avx2 and scalar kernels are equivalent") {
    const KernelTable* avx = kernels::avx2_kernels();
    if (!avx) return;
    const KernelTable& sc = kernels::scalar_kernels();
    std::mt19937_64 rng(3);
    for (unsigned n = 1; n <= 10; ++n) {
        for (unsigned k = 1; k <= std::min(n, 7u); ++k) {
            auto targets = random_targets(rng, n, k);
            auto s1 = random_state(rng, n);
            auto s2 = s1;
            std::size_t d = std::size_t{1} << k;
            std::vector<cplx> u(d * d);
            std::normal_distribution<double> g;
            for (auto& x : u) x = {g(rng), g(rng)};
            kernels::apply(sc, s1.data(), n, targets.data(), k, u.data());
            kernels::apply(*avx, s2.data(), n, targets.data(), k, u.data());
            CHECK_MESSAGE(max_diff(s1, s2) < 1e-12, "n=" << n << " k=" << k);
        }
        auto a = random_state(rng, n);
        auto b = random_state(rng, n);
        CHECK(std::abs(sc.norm_sqr(a.data(), a.size()) - avx->norm_sqr(a.data(), a.size())) < 1e-9);
        CHECK(std::abs(sc.diff_norm_sqr(a.data(), b.data(), a.size()) - avx->diff_norm_sqr(a.data(), b.data(), a.size())) <
              1e-9);
    }
}

TEST_CASE("every target position on the avx2 single-qubit path") {
    const KernelTable* avx = kernels::avx2_kernels();
    if (!avx) return;
    std::mt19937_64 rng(5);
    Matrix h = mat_of_gate(mk::named(GateName::H)).matrix();
    auto hm = row_major(h);
    for (unsigned n = 1; n <= 8; ++n) {
        for (unsigned t = 0; t < n; ++t) {
            auto s1 = random_state(rng, n);
            auto s2 = s1;
            kernels::scalar_kernels().apply_1q(s1.data(), n, t, hm.data());
            avx->apply_1q(s2.data(), n, t, hm.data());
            CHECK(max_diff(s1, s2) < 1e-12);
        }
    }
}
