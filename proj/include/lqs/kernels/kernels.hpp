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

// Dense state-vector kernels. A state over n qubits is 2^n contiguous complex
// amplitudes; qubit position p (0 = most significant) is index bit n-1-p.
// Matrices are row-major with the first target on the most significant bit.

#include <complex>
#include <cstddef>

namespace lqs::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;
    void (*apply_1q)(cplx* state, unsigned n, unsigned target, const cplx* u);
    void (*apply_2q)(cplx* state, unsigned n, unsigned t0, unsigned t1, const cplx* u);
    void (*apply_kq)(cplx* state, unsigned n, const unsigned* targets, unsigned k, const cplx* u);
    double (*norm_sqr)(const cplx* a, std::size_t len);
    double (*diff_norm_sqr)(const cplx* a, const cplx* b, std::size_t len);
};

const KernelTable& scalar_kernels();
/// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// The table used by the simulator: AVX2 when available, unless the
/// environment variable LQS_SIMD is set to "scalar".
const KernelTable& active_kernels();

/// Dispatches to apply_1q / apply_2q / apply_kq by arity.
void apply(const KernelTable& kt, cplx* state, unsigned n, const unsigned* targets, unsigned k, const cplx* u);

}  // namespace lqs::kernels
