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

#include "lqs/interp/store.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lqs/kernels/kernels.hpp"

namespace lqs {

const char* sim_mode_name(SimMode m) { return m == SimMode::Density ? "density" : "statevector"; }

namespace {

// Inserts bit b at position p (big-endian over n+1 qubits) into index i of n qubits.
inline std::size_t insert_bit(std::size_t i, std::size_t n, std::size_t p, std::size_t b) {
    const std::size_t low_bits = n - p;  // number of bits below the inserted one
    const std::size_t low = i & ((std::size_t{1} << low_bits) - 1);
    const std::size_t high = i >> low_bits;
    return (((high << 1) | b) << low_bits) | low;
}

}  // namespace

QuantumStore::QuantumStore(SimMode mode, std::size_t max_qubits)
    : mode_(mode), max_qubits_(max_qubits), data_(1, cplx(1.0)) {}

QuantumStore QuantumStore::from_density(std::vector<QubitSymbol> syms, const Matrix& rho, std::size_t max_qubits) {
    QuantumStore s(SimMode::Density, max_qubits);
    const std::size_t d = std::size_t{1} << syms.size();
    if (static_cast<std::size_t>(rho.rows()) != d || rho.rows() != rho.cols())
        throw StoreError("density matrix dimension does not match qubit count");
    if (syms.size() > max_qubits) throw StoreError("qubit budget exceeded");
    s.slots_ = syms;
    s.live_ = std::move(syms);
    s.data_.assign(d * d, cplx(0));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            s.data_[r * d + c] = rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return s;
}

bool QuantumStore::is_live(const QubitSymbol& q) const { return std::find(live_.begin(), live_.end(), q) != live_.end(); }

std::size_t QuantumStore::position(const QubitSymbol& q) const {
    if (!is_live(q)) throw StoreError("qubit " + q.name() + " is not live");
    return static_cast<std::size_t>(std::find(slots_.begin(), slots_.end(), q) - slots_.begin());
}

void QuantumStore::allocate(const QubitSymbol& q) {
    if (std::find(slots_.begin(), slots_.end(), q) != slots_.end())
        throw StoreError("qubit " + q.name() + " allocated twice");
    const std::size_t cap = mode_ == SimMode::Density ? max_qubits_ : max_qubits_ + 8;
    if (live_.size() + 1 > max_qubits_ || slots_.size() + 1 > cap)
        throw StoreError("qubit budget of " + std::to_string(max_qubits_) + " exceeded");
    const std::size_t d = dim();
    if (mode_ == SimMode::Density) {
        std::vector<cplx> next(4 * d * d, cplx(0));
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) next[(2 * r) * (2 * d) + 2 * c] = data_[r * d + c];
        data_ = std::move(next);
    } else {
        std::vector<cplx> next(2 * d, cplx(0));
        for (std::size_t i = 0; i < d; ++i) next[2 * i] = data_[i];
        data_ = std::move(next);
    }
    slots_.push_back(q);
    live_.push_back(q);
}

void QuantumStore::release(const QubitSymbol& q) {
    const std::size_t p = position(q);
    live_.erase(std::find(live_.begin(), live_.end(), q));
    if (mode_ == SimMode::Statevector) return;
    const std::size_t n = slots_.size() - 1;
    const std::size_t d = std::size_t{1} << n;
    const std::size_t full = 2 * d;
    std::vector<cplx> next(d * d, cplx(0));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            cplx acc = 0;
            for (std::size_t b = 0; b < 2; ++b) acc += data_[insert_bit(r, n, p, b) * full + insert_bit(c, n, p, b)];
            next[r * d + c] = acc;
        }
    }
    data_ = std::move(next);
    slots_.erase(slots_.begin() + static_cast<std::ptrdiff_t>(p));
}

void QuantumStore::apply(const Matrix& u, const std::vector<QubitSymbol>& targets) {
    const std::size_t k = targets.size();
    if (static_cast<std::size_t>(u.rows()) != (std::size_t{1} << k)) throw StoreError("gate arity mismatch");
    std::vector<unsigned> pos(k);
    for (std::size_t t = 0; t < k; ++t) pos[t] = static_cast<unsigned>(position(targets[t]));
    const std::size_t ud = static_cast<std::size_t>(u.rows());
    std::vector<cplx> rows(ud * ud);
    for (std::size_t r = 0; r < ud; ++r)
        for (std::size_t c = 0; c < ud; ++c) rows[r * ud + c] = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    const auto& kt = kernels::active_kernels();
    const unsigned n = static_cast<unsigned>(slots_.size());
    if (mode_ == SimMode::Statevector) {
        kernels::apply(kt, data_.data(), n, pos.data(), static_cast<unsigned>(k), rows.data());
        return;
    }
    // ρ as a 2n-qubit vector: rows on positions [0, n), columns on [n, 2n).
    kernels::apply(kt, data_.data(), 2 * n, pos.data(), static_cast<unsigned>(k), rows.data());
    for (auto& v : rows) v = std::conj(v);
    for (auto& p : pos) p += n;
    kernels::apply(kt, data_.data(), 2 * n, pos.data(), static_cast<unsigned>(k), rows.data());
}

double QuantumStore::weight(const QubitSymbol& q, bool outcome) const {
    const std::size_t p = position(q);
    const std::size_t n = slots_.size();
    const std::size_t bit = std::size_t{1} << (n - 1 - p);
    const std::size_t d = dim();
    double w = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (((i & bit) != 0) != outcome) continue;
        w += mode_ == SimMode::Density ? data_[i * d + i].real() : std::norm(data_[i]);
    }
    return w;
}

void QuantumStore::project(const QubitSymbol& q, bool outcome) {
    const std::size_t p = position(q);
    const std::size_t n = slots_.size();
    const std::size_t bit = std::size_t{1} << (n - 1 - p);
    const std::size_t d = dim();
    if (mode_ == SimMode::Statevector) {
        for (std::size_t i = 0; i < d; ++i)
            if (((i & bit) != 0) != outcome) data_[i] = 0;
        return;
    }
    for (std::size_t r = 0; r < d; ++r) {
        const bool row_ok = ((r & bit) != 0) == outcome;
        for (std::size_t c = 0; c < d; ++c) {
            if (!row_ok || ((c & bit) != 0) != outcome) data_[r * d + c] = 0;
        }
    }
}

double QuantumStore::trace() const {
    const std::size_t d = dim();
    if (mode_ == SimMode::Statevector) return kernels::active_kernels().norm_sqr(data_.data(), d);
    double t = 0;
    for (std::size_t i = 0; i < d; ++i) t += data_[i * d + i].real();
    return t;
}

void QuantumStore::normalize() {
    double t = trace();
    if (t <= 0) throw StoreError("cannot normalise a zero state");
    double s = mode_ == SimMode::Statevector ? 1.0 / std::sqrt(t) : 1.0 / t;
    for (auto& v : data_) v *= s;
}

Matrix QuantumStore::density() const {
    const std::size_t d = dim();
    Matrix rho(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                mode_ == SimMode::Density ? data_[r * d + c] : data_[r] * std::conj(data_[c]);
    return rho;
}

Matrix QuantumStore::reduced_density(const std::vector<QubitSymbol>& keep) const {
    const std::size_t n = slots_.size();
    std::vector<std::size_t> keep_pos;
    for (const auto& q : keep) {
        auto it = std::find(slots_.begin(), slots_.end(), q);
        if (it == slots_.end()) throw StoreError("qubit " + q.name() + " has no physical slot");
        keep_pos.push_back(static_cast<std::size_t>(it - slots_.begin()));
    }
    std::vector<std::size_t> drop;
    for (std::size_t p = 0; p < n; ++p)
        if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end()) drop.push_back(p);
    Matrix reduced = partial_trace(density(), n, drop);
    // Reorder the kept qubits (which are in physical order) to the requested order.
    std::vector<std::size_t> sorted = keep_pos;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = keep.size();
    const std::size_t d = std::size_t{1} << k;
    std::vector<std::size_t> perm(k);  // requested index t -> bit in sorted order
    for (std::size_t t = 0; t < k; ++t)
        perm[t] = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), keep_pos[t]) - sorted.begin());
    auto remap = [&](std::size_t idx) {
        std::size_t out = 0;
        for (std::size_t t = 0; t < k; ++t) {
            std::size_t b = (idx >> (k - 1 - perm[t])) & 1u;
            out |= b << (k - 1 - t);
        }
        return out;
    };
    Matrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            out(static_cast<Eigen::Index>(remap(r)), static_cast<Eigen::Index>(remap(c))) =
                reduced(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

Matrix partial_trace(const Matrix& rho, std::size_t n, const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> drop = positions;
    std::sort(drop.begin(), drop.end());
    const std::size_t m = drop.size();
    const std::size_t kept = n - m;
    const std::size_t dk = std::size_t{1} << kept;
    const std::size_t dm = std::size_t{1} << m;
    std::vector<std::size_t> keep_pos;
    for (std::size_t p = 0; p < n; ++p)
        if (!std::binary_search(drop.begin(), drop.end(), p)) keep_pos.push_back(p);
    auto compose = [&](std::size_t ki, std::size_t di) {
        std::size_t idx = 0;
        for (std::size_t t = 0; t < kept; ++t)
            if ((ki >> (kept - 1 - t)) & 1u) idx |= std::size_t{1} << (n - 1 - keep_pos[t]);
        for (std::size_t t = 0; t < m; ++t)
            if ((di >> (m - 1 - t)) & 1u) idx |= std::size_t{1} << (n - 1 - drop[t]);
        return idx;
    };
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            cplx acc = 0;
            for (std::size_t b = 0; b < dm; ++b)
                acc += rho(static_cast<Eigen::Index>(compose(r, b)), static_cast<Eigen::Index>(compose(c, b)));
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    return out;
}

}  // namespace lqs
