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

#include <vector>

#include "lqs/kernels/kernels.hpp"

namespace lqs::kernels {

namespace {

void apply_1q(cplx* s, unsigned n, unsigned target, const cplx* u) {
    const std::size_t bit = std::size_t{1} << (n - 1 - target);
    const std::size_t len = std::size_t{1} << n;
    for (std::size_t base = 0; base < len; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + bit;
            const cplx a0 = s[i0];
            const cplx a1 = s[i1];
            s[i0] = u[0] * a0 + u[1] * a1;
            s[i1] = u[2] * a0 + u[3] * a1;
        }
    }
}

void apply_kq(cplx* s, unsigned n, const unsigned* targets, unsigned k, const cplx* u) {
    const std::size_t len = std::size_t{1} << n;
    const std::size_t dim = std::size_t{1} << k;
    std::vector<std::size_t> offs(dim, 0);
    std::size_t mask = 0;
    for (unsigned t = 0; t < k; ++t) mask |= std::size_t{1} << (n - 1 - targets[t]);
    for (std::size_t l = 0; l < dim; ++l) {
        std::size_t o = 0;
        for (unsigned t = 0; t < k; ++t)
            if (l & (std::size_t{1} << (k - 1 - t))) o |= std::size_t{1} << (n - 1 - targets[t]);
        offs[l] = o;
    }
    std::vector<cplx> in(dim);
    for (std::size_t base = 0; base < len; ++base) {
        if (base & mask) continue;
        for (std::size_t l = 0; l < dim; ++l) in[l] = s[base + offs[l]];
        for (std::size_t r = 0; r < dim; ++r) {
            cplx acc = 0;
            const cplx* row = u + r * dim;
            for (std::size_t c = 0; c < dim; ++c) acc += row[c] * in[c];
            s[base + offs[r]] = acc;
        }
    }
}

void apply_2q(cplx* s, unsigned n, unsigned t0, unsigned t1, const cplx* u) {
    const unsigned targets[2] = {t0, t1};
    apply_kq(s, n, targets, 2, u);
}

double norm_sqr(const cplx* a, std::size_t len) {
    double acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc += std::norm(a[i]);
    return acc;
}

double diff_norm_sqr(const cplx* a, const cplx* b, std::size_t len) {
    double acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc += std::norm(a[i] - b[i]);
    return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", apply_1q, apply_2q, apply_kq, norm_sqr, diff_norm_sqr};
    return table;
}

}  // namespace lqs::kernels
