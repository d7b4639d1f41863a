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

#include <cstdlib>
#include <cstring>

#include "lqs/kernels/kernels.hpp"

namespace lqs::kernels {

#ifdef LQS_HAVE_AVX2
const KernelTable* avx2_table_unchecked();
#endif

const KernelTable* avx2_kernels() {
#ifdef LQS_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("LQS_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const KernelTable* simd = avx2_kernels();
        return simd ? simd : &scalar_kernels();
    }();
    return *chosen;
}

void apply(const KernelTable& kt, cplx* state, unsigned n, const unsigned* targets, unsigned k, const cplx* u) {
    if (k == 0) {
        const std::size_t len = std::size_t{1} << n;
        for (std::size_t i = 0; i < len; ++i) state[i] *= u[0];
        return;
    }
    if (k == 1) {
        kt.apply_1q(state, n, targets[0], u);
    } else if (k == 2) {
        kt.apply_2q(state, n, targets[0], targets[1], u);
    } else {
        kt.apply_kq(state, n, targets, k, u);
    }
}

}  // namespace lqs::kernels
