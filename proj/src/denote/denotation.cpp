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

#include "lqs/denote/denotation.hpp"

#include <cmath>
#include <algorithm>
#include <utility>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "lqs/core/desugar.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/interp/interp.hpp"
#include "lqs/typecheck/typecheck.hpp"

namespace lqs {

namespace {

bool first_order_value(const ExprPtr& v) {
    if (const auto* t = as<ex::Tuple>(v)) {
        for (const auto& i : t->items)
            if (!first_order_value(i)) return false;
        return true;
    }
    return as<ex::Bool>(v) || as<ex::Unit>(v) || as<ex::QLoc>(v);
}

struct Path {
    QuantumStore store;
    CmdPtr term;
};

}  // namespace

Matrix Instrument::apply(const std::string& key, const Matrix& rho) const {
    const auto d = static_cast<Eigen::Index>(dim());
    if (rho.rows() != d || rho.cols() != d) throw DenotationError("input state has the wrong dimension");
    Matrix out = Matrix::Zero(d, d);
    auto it = branches.find(key);
    if (it == branches.end()) return out;
    const Matrix& j = it->second;
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            if (rho(r, c) != cplx(0)) out += rho(r, c) * j.block(r * d, c * d, d, d);
    return out;
}

double Instrument::probability(const std::string& key, const Matrix& rho) const {
    return apply(key, rho).trace().real();
}

std::map<std::string, double> Instrument::distribution() const {
    Matrix zero = Matrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    zero(0, 0) = 1;
    std::map<std::string, double> out;
    for (const auto& [key, j] : branches) out[key] = probability(key, zero);
    return out;
}

Instrument denote(const std::vector<QubitSymbol>& free, const CmdPtr& m0, const DenoteOptions& opts) {
    CmdPtr m = desugar(m0);
    if (!free_vars(m).empty()) throw DenotationError("command has free variables: " + *free_vars(m).begin());
    if (opts.typecheck) {
        auto t = infer_cmd({}, Signature(free), m);
        if (is_higher_order(t)) throw DenotationError("result type " + print(t) + " is higher-order");
    }

    const std::size_t k = free.size();
    if (2 * k > opts.max_qubits) throw DenotationError("too many free qubits for the qubit budget");
    std::vector<QubitSymbol> layout;
    for (const auto& q : free) layout.push_back(QubitSymbol::fresh(q.name() + "_ref"));
    layout.insert(layout.end(), free.begin(), free.end());

    // Unnormalised maximally entangled state sum_ij |ii><jj|.
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << k);
    Matrix omega = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) omega(i * d + i, j * d + j) = 1;

    Instrument inst;
    inst.free_qubits = k;
    std::vector<Path> stack;
    stack.push_back({QuantumStore::from_density(layout, omega, opts.max_qubits), m});
    GateCache cache;
    ProbeMeasurer probe;
    std::size_t paths = 1;
    std::size_t steps = 0;

    while (!stack.empty()) {
        Path p = std::move(stack.back());
        stack.pop_back();
        while (true) {
            if (++steps > opts.step_limit) throw DenotationError("step limit exceeded");
            probe.reset();
            StepResult r;
            try {
                r = step_cmd(p.store, p.term, probe, &cache);
            } catch (const StoreError& e) {
                throw DenotationError(e.what());
            }
            if (probe.requested()) {
                if (++paths > opts.max_branches) throw DenotationError("branch limit exceeded");
                for (bool outcome : {true, false}) {
                    QuantumStore copy = p.store;
                    ForcedMeasurer forced(outcome);
                    StepResult fr = step_cmd(copy, p.term, forced, &cache);
                    if (copy.trace() <= opts.drop_below) continue;
                    stack.push_back({std::move(copy), fr.cmd});
                }
                break;
            }
            if (r.kind == StepResult::Kind::Stuck) throw DenotationError("evaluation is stuck: " + r.reason);
            if (r.kind == StepResult::Kind::Final) {
                if (!first_order_value(r.expr)) throw DenotationError("result value is not first-order");
                Matrix rho = p.store.reduced_density(layout);
                auto [it, fresh] = inst.branches.try_emplace(value_key(r.expr), rho);
                if (!fresh) it->second += rho;
                break;
            }
            p.term = r.cmd;
        }
    }
    return inst;
}

Instrument denote(const QubitContext& ctx, const CmdPtr& m, const DenoteOptions& opts) {
    CmdPtr closed = desugar(m);
    std::vector<QubitSymbol> free;
    for (const auto& c : ctx) {
        closed = subst(mk::qloc(c.sym), c.var, closed);
        free.push_back(c.sym);
    }
    for (const auto& q : free_qubit_symbols(closed))
        if (std::find(free.begin(), free.end(), q) == free.end()) free.push_back(q);
    return denote(free, closed, opts);
}

EquivReport equiv(const Instrument& a, const Instrument& b, double tol) {
    if (a.free_qubits != b.free_qubits) throw DenotationError("instruments act on different numbers of qubits");
    EquivReport rep;
    auto live = [&](const Instrument& x, const std::string& key) -> const Matrix* {
        auto it = x.branches.find(key);
        if (it == x.branches.end() || it->second.norm() <= tol) return nullptr;
        return &it->second;
    };
    std::map<std::string, int> keys;
    for (const auto& [k, j] : a.branches) keys[k];
    for (const auto& [k, j] : b.branches) keys[k];
    for (const auto& [key, unused] : keys) {
        const Matrix* ja = live(a, key);
        const Matrix* jb = live(b, key);
        double dev;
        if (ja && jb) {
            dev = (*ja - *jb).norm();
        } else if (ja || jb) {
            rep.unmatched.push_back(key);
            dev = (ja ? *ja : *jb).norm();
        } else {
            auto ia = a.branches.find(key);
            auto ib = b.branches.find(key);
            dev = (ia != a.branches.end() ? ia->second.norm() : 0.0) + (ib != b.branches.end() ? ib->second.norm() : 0.0);
        }
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    rep.equivalent = rep.unmatched.empty() && rep.max_deviation <= tol;
    return rep;
}

EquivReport equiv(const QubitContext& ctx, const CmdPtr& m1, const CmdPtr& m2, double tol, const DenoteOptions& opts) {
    return equiv(denote(ctx, m1, opts), denote(ctx, m2, opts), tol);
}

CptpReport check_cptp(const Instrument& inst, double tol) {
    CptpReport rep;
    const std::size_t k = inst.free_qubits;
    const auto d = static_cast<Eigen::Index>(inst.dim());
    Matrix total = Matrix::Zero(d * d, d * d);
    rep.min_eigenvalue = 0.0;
    bool first = true;
    for (const auto& [key, j] : inst.branches) {
        if (j.rows() != d * d || j.cols() != d * d) return rep;
        rep.hermitian_deviation = std::max(rep.hermitian_deviation, (j - j.adjoint()).norm());
        Matrix h = (j + j.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        rep.min_eigenvalue = first ? lo : std::min(rep.min_eigenvalue, lo);
        first = false;
        total += j;
    }
    std::vector<std::size_t> out_positions;
    for (std::size_t i = k; i < 2 * k; ++i) out_positions.push_back(i);
    Matrix reduced = partial_trace(total, 2 * k, out_positions);
    rep.trace_deviation = (reduced - Matrix::Identity(d, d)).norm();
    rep.ok = !inst.branches.empty() && rep.min_eigenvalue >= -tol && rep.hermitian_deviation <= tol &&
             rep.trace_deviation <= tol;
    return rep;
}

std::string serialize(const Instrument& inst) {
    nlohmann::json j;
    j["free_qubits"] = inst.free_qubits;
    j["choi_dim"] = inst.dim() * inst.dim();
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& [key, choi] : inst.branches) {
        nlohmann::json entries = nlohmann::json::array();
        for (Eigen::Index r = 0; r < choi.rows(); ++r)
            for (Eigen::Index c = 0; c < choi.cols(); ++c) entries.push_back({choi(r, c).real(), choi(r, c).imag()});
        branches.push_back({{"outcome", key}, {"choi", std::move(entries)}});
    }
    j["branches"] = std::move(branches);
    return j.dump();
}

Instrument deserialize(const std::string& text) {
    Instrument inst;
    try {
        auto j = nlohmann::json::parse(text);
        inst.free_qubits = j.at("free_qubits").get<std::size_t>();
        const auto d = static_cast<Eigen::Index>(inst.dim() * inst.dim());
        for (const auto& b : j.at("branches")) {
            const auto& entries = b.at("choi");
            if (entries.size() != static_cast<std::size_t>(d * d)) throw DenotationError("Choi matrix has the wrong size");
            Matrix m(d, d);
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index c = 0; c < d; ++c) {
                    const auto& e = entries[static_cast<std::size_t>(r * d + c)];
                    m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
                }
            inst.branches.emplace(b.at("outcome").get<std::string>(), std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DenotationError(std::string("malformed instrument: ") + e.what());
    }
    return inst;
}

}  // namespace lqs
