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

// Built with -mavx2 -mfma. Only reached through the dispatcher after a CPU check.

#include <immintrin.h>

#include <vector>

#include "lqs/kernels/kernels.hpp"

namespace lqs::kernels {

namespace {

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * (re + i im) for two packed complex numbers, coefficients per lane pair.
inline __m256d cmul(__m256d a, __m256d re, __m256d im) {
    __m256d sw = _mm256_permute_pd(a, 0b0101);
    return _mm256_fmaddsub_pd(a, re, _mm256_mul_pd(sw, im));
}

struct Coeff {
    __m256d re, im;
};

inline Coeff bcast(cplx c) { return {_mm256_set1_pd(c.real()), _mm256_set1_pd(c.imag())}; }
inline Coeff lanes(cplx lo, cplx hi) {
    return {_mm256_setr_pd(lo.real(), lo.real(), hi.real(), hi.real()),
            _mm256_setr_pd(lo.imag(), lo.imag(), hi.imag(), hi.imag())};
}

void apply_kq_scalar(cplx* s, unsigned n, const unsigned* targets, unsigned k, const cplx* u) {
    scalar_kernels().apply_kq(s, n, targets, k, u);
}

void apply_1q(cplx* s, unsigned n, unsigned target, const cplx* u) {
    const std::size_t bit = std::size_t{1} << (n - 1 - target);
    const std::size_t len = std::size_t{1} << n;
    if (bit == 1) {
        const Coeff diag = lanes(u[0], u[3]);
        const Coeff anti = lanes(u[1], u[2]);
        for (std::size_t i = 0; i < len; i += 2) {
            __m256d v = load2(s + i);
            __m256d sw = _mm256_permute2f128_pd(v, v, 1);
            store2(s + i, _mm256_add_pd(cmul(v, diag.re, diag.im), cmul(sw, anti.re, anti.im)));
        }
        return;
    }
    const Coeff c0 = bcast(u[0]), c1 = bcast(u[1]), c2 = bcast(u[2]), c3 = bcast(u[3]);
    for (std::size_t base = 0; base < len; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; off += 2) {
            cplx* p0 = s + base + off;
            cplx* p1 = p0 + bit;
            __m256d a0 = load2(p0);
            __m256d a1 = load2(p1);
            store2(p0, _mm256_add_pd(cmul(a0, c0.re, c0.im), cmul(a1, c1.re, c1.im)));
            store2(p1, _mm256_add_pd(cmul(a0, c2.re, c2.im), cmul(a1, c3.re, c3.im)));
        }
    }
}

void apply_kq(cplx* s, unsigned n, const unsigned* targets, unsigned k, const cplx* u) {
    const std::size_t len = std::size_t{1} << n;
    const std::size_t dim = std::size_t{1} << k;
    std::size_t mask = 0;
    for (unsigned t = 0; t < k; ++t) mask |= std::size_t{1} << (n - 1 - targets[t]);
    if ((mask & 1) || k > 6) {
        apply_kq_scalar(s, n, targets, k, u);
        return;
    }
    std::vector<std::size_t> offs(dim, 0);
    for (std::size_t l = 0; l < dim; ++l) {
        std::size_t o = 0;
        for (unsigned t = 0; t < k; ++t)
            if (l & (std::size_t{1} << (k - 1 - t))) o |= std::size_t{1} << (n - 1 - targets[t]);
        offs[l] = o;
    }
    std::vector<Coeff> coeff(dim * dim);
    for (std::size_t i = 0; i < dim * dim; ++i) coeff[i] = bcast(u[i]);
    __m256d in[64];
    const std::size_t skip = mask | 1;
    for (std::size_t base = 0; base < len; base = ((base | skip) + 1) & ~skip) {
        for (std::size_t l = 0; l < dim; ++l) in[l] = load2(s + base + offs[l]);
        for (std::size_t r = 0; r < dim; ++r) {
            __m256d acc = _mm256_setzero_pd();
            const Coeff* row = coeff.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) acc = _mm256_add_pd(acc, cmul(in[c], row[c].re, row[c].im));
            store2(s + base + offs[r], acc);
        }
    }
}

void apply_2q(cplx* s, unsigned n, unsigned t0, unsigned t1, const cplx* u) {
    const unsigned targets[2] = {t0, t1};
    apply_kq(s, n, targets, 2, u);
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double norm_sqr(const cplx* a, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        __m256d v = load2(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < len; ++i) total += std::norm(a[i]);
    return total;
}

double diff_norm_sqr(const cplx* a, const cplx* b, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        __m256d v = _mm256_sub_pd(load2(a + i), load2(b + i));
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < len; ++i) total += std::norm(a[i] - b[i]);
    return total;
}

}  // namespace

const KernelTable* avx2_table_unchecked() {
    static const KernelTable table{"avx2", apply_1q, apply_2q, apply_kq, norm_sqr, diff_norm_sqr};
    return &table;
}

}  // namespace lqs::kernels
