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

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero when any
// criterion fails or exceeds its time limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "lqs/axioms/axioms.hpp"
#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/gen/generators.hpp"
#include "lqs/interp/interp.hpp"
#include "lqs/qsharp/frontend.hpp"
#include "lqs/typecheck/typecheck.hpp"
#include "teleport_harness.hpp"

using namespace lqs;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string data(const char* name) { return testing::read_file(std::string(LQS_TEST_DATA) + "/" + name); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

template <class F>
std::string type_error_kind(F f) {
    try {
        f();
    } catch (const TypeError& e) {
        return type_error_kind_name(e.kind());
    }
    return "none";
}

Outcome safety() {
    Outcome o;
    auto a = type_error_kind([] { check_program({}, Term{qs::elaborate_source(data("escaping.qs")).term}); });
    auto b = type_error_kind([] { check_program({}, Term{qs::elaborate_source(data("cloning.qs")).term}); });
    auto golden = type_error_kind([] { check_program({}, parse_program(data("teleport.lqs")).term); });
    auto elab = type_error_kind([] { check_program({}, Term{qs::elaborate_source(data("teleport.qs")).term}); });
    o.pass = a == "EscapingQubit" && b == "AliasedQubits" && golden == "none" && elab == "none";
    o.detail = "escaping=" + a + " cloning=" + b + " teleport-golden=" + (golden == "none" ? "typed" : golden) +
               " teleport-elab=" + (elab == "none" ? "typed" : elab);
    return o;
}

Outcome axiom_suite() {
    Outcome o;
    double worst = 0.0;
    std::ostringstream failed;
    for (AxiomId id : all_axioms()) {
        auto r = check_axiom_suite(id, 100, 20260 + static_cast<std::uint64_t>(axiom_letter(id)), kTol);
        worst = std::max(worst, r.max_deviation);
        if (r.passed != r.trials || r.trials != 100 || r.max_deviation > kTol) {
            o.pass = false;
            failed << " " << axiom_letter(id) << "(" << r.passed << "/" << r.trials << ")";
        }
    }
    o.detail = "11 axioms x 100 trials, max deviation " + sci(worst) + (o.pass ? "" : ", failed:" + failed.str());
    return o;
}

Outcome cptp() {
    Outcome o;
    gen::Rng rng(3001);
    double min_eig = 1.0;
    double trace_dev = 0.0;
    std::size_t bad = 0;
    const std::size_t n = 200;
    for (std::size_t i = 0; i < n; ++i) {
        gen::ProgramOptions opts;
        for (std::size_t k = 0; k < i % 3; ++k) {
            std::string name = k == 0 ? "q" : "r";
            opts.context.push_back({name, QubitSymbol::fresh(name)});
        }
        auto m = gen::random_program(rng, opts);
        check_program(opts.context, Term{m});
        auto rep = check_cptp(denote(opts.context, m), kTol);
        min_eig = std::min(min_eig, rep.min_eigenvalue);
        trace_dev = std::max(trace_dev, rep.trace_deviation);
        if (!rep.ok || rep.min_eigenvalue < -kTol || rep.trace_deviation > kTol) ++bad;
    }
    o.pass = bad == 0;
    o.detail = std::to_string(n) + " programs, min eigenvalue " + sci(min_eig) + ", trace deviation " + sci(trace_dev) +
               ", failures " + std::to_string(bad);
    return o;
}

Outcome oracle_agreement() {
    Outcome o;
    gen::Rng rng(4001);
    const std::size_t shots = 10000;
    const double n = static_cast<double>(shots);
    std::size_t bad = 0;
    std::size_t outcomes = 0;
    double worst_z = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        gen::ProgramOptions opts;
        opts.shape = gen::ResultShape::BoolTuple;
        auto m = gen::random_program(rng, opts);
        auto dist = denote(QubitContext{}, m).distribution();
        RunOptions ro;
        ro.shots = shots;
        ro.seed = 7000 + i;
        ro.mode = SimMode::Density;
        auto dens = run(m, ro);
        ro.mode = SimMode::Statevector;
        auto sv = run(m, ro);
        auto count = [](const RunReport& r, const std::string& k) {
            auto it = r.histogram.find(k);
            return it == r.histogram.end() ? 0.0 : static_cast<double>(it->second);
        };
        for (const auto* r : {&dens, &sv})
            for (const auto& [k, c] : r->histogram)
                if (!dist.count(k)) ++bad;
        for (const auto& [k, p] : dist) {
            ++outcomes;
            double sigma = std::sqrt(n * p * (1 - p));
            double dd = std::abs(count(dens, k) - n * p);
            double ds = std::abs(count(sv, k) - count(dens, k));
            if (dd > 5 * sigma + 1e-6) ++bad;
            if (ds > 5 * std::sqrt(2.0) * sigma + 1e-6) ++bad;
            if (sigma > 0) worst_z = std::max(worst_z, dd / sigma);
        }
    }
    o.pass = bad == 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", worst_z);
    o.detail = "50 programs, " + std::to_string(outcomes) + " outcomes, worst density z " + buf + ", violations " +
               std::to_string(bad);
    return o;
}

Outcome teleport() {
    Outcome o;
    auto elab = qs::elaborate_source(data("teleport.qs"));
    gen::Rng rng(5001);
    double worst = 1.0;
    for (int i = 0; i < 20; ++i) worst = std::min(worst, testing::teleport_fidelity(elab, gen::random_gate(rng, 1, 4)));
    auto golden = parse_program(data("teleport.lqs")).term;
    bool same = alpha_eq_modulo_symbols(desugar(Term{elab.term}), desugar(golden));
    o.pass = worst >= 1 - kTol && same;
    o.detail = "20 random R, min fidelity 1-" + sci(1 - worst) + ", golden alpha-equivalent: " + (same ? "yes" : "no");
    return o;
}

std::size_t count_scopes(const CmdPtr& m);

std::size_t count_scopes(const ExprPtr& e) {
    return std::visit(overloaded{
                          [](const ex::Box& b) { return count_scopes(b.cmd); },
                          [](const ex::Let& l) { return count_scopes(l.bound) + count_scopes(l.body); },
                          [](const ex::App& a) { return count_scopes(a.fn) + count_scopes(a.arg); },
                          [](const ex::Tuple& t) {
                              std::size_t n = 0;
                              for (const auto& i : t.items) n += count_scopes(i);
                              return n;
                          },
                          [](const auto&) { return std::size_t{0}; },
                      },
                      e->node);
}

// Live Scope brackets in evaluation position.
std::size_t count_scopes(const CmdPtr& m) {
    return std::visit(overloaded{
                          [](const cm::Scope& s) { return 1 + count_scopes(s.body); },
                          [](const cm::Bnd& b) { return count_scopes(b.boxed); },
                          [](const auto&) { return std::size_t{0}; },
                      },
                      m->node);
}

Outcome progress_preservation() {
    Outcome o;
    gen::Rng rng(6001);
    std::size_t stuck = 0;
    std::size_t type_breaks = 0;
    std::size_t live_breaks = 0;
    std::size_t steps = 0;
    for (std::size_t i = 0; i < 500; ++i) {
        gen::ProgramOptions opts;
        for (std::size_t k = 0; k < i % 3; ++k) {
            std::string name = k == 0 ? "q" : "r";
            opts.context.push_back({name, QubitSymbol::fresh(name)});
        }
        auto m = desugar(gen::random_program(rng, opts));
        QuantumStore store(i % 2 ? SimMode::Statevector : SimMode::Density);
        for (const auto& c : opts.context) {
            store.allocate(c.sym);
            m = subst(mk::qloc(c.sym), c.var, m);
        }
        std::size_t base = store.live().size();
        auto expected = infer_cmd({}, Signature(store.live()), m);
        ExecOptions eo;
        bool typed = true;
        bool bracketed = true;
        eo.observer = [&](const CmdPtr& c, const QuantumStore& s) {
            ++steps;
            try {
                if (!types_equivalent(infer_cmd({}, Signature(s.live()), c), expected)) typed = false;
            } catch (const TypeError&) {
                typed = false;
            }
            if (s.live().size() != base + count_scopes(c)) bracketed = false;
        };
        SamplingMeasurer meas(i);
        try {
            execute(m, store, meas, eo);
        } catch (const InterpError&) {
            ++stuck;
        }
        if (store.live().size() != base) bracketed = false;
        if (!typed) ++type_breaks;
        if (!bracketed) ++live_breaks;
    }
    o.pass = stuck == 0 && type_breaks == 0 && live_breaks == 0;
    o.detail = "500 programs, " + std::to_string(steps) + " steps, stuck " + std::to_string(stuck) +
               ", preservation failures " + std::to_string(type_breaks) + ", live-set failures " +
               std::to_string(live_breaks);
    return o;
}

Outcome simplifier() {
    Outcome o;
    gen::Rng rng(7001);
    std::size_t injected_ids = 0;
    std::size_t injected_fresh = 0;
    std::size_t left_ids = 0;
    std::size_t left_fresh = 0;
    std::size_t inequivalent = 0;
    std::size_t exceeded = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        gen::ProgramOptions opts;
        if (i % 2) opts.context.push_back({"q", QubitSymbol::fresh("q")});
        opts.identity_rate = 0.3;
        opts.fresh_meas_rate = 0.4;
        auto m = gen::random_program(rng, opts);
        injected_ids += gen::count_identity_gates(m);
        injected_fresh += gen::count_fresh_measurements(m);
        auto r = simplify(m);
        if (r.budget_exceeded) ++exceeded;
        left_ids += gen::count_identity_gates(r.cmd);
        left_fresh += gen::count_fresh_measurements(r.cmd);
        if (!equiv(opts.context, m, r.cmd, kTol).equivalent) ++inequivalent;
    }
    o.pass = inequivalent == 0 && left_ids == 0 && left_fresh == 0 && exceeded == 0 && injected_ids > 0 &&
             injected_fresh > 0;
    o.detail = "100 programs, identity gates " + std::to_string(injected_ids) + "->" + std::to_string(left_ids) +
               ", fresh measurements " + std::to_string(injected_fresh) + "->" + std::to_string(left_fresh) +
               ", inequivalent " + std::to_string(inequivalent);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "safety negatives", 1.0, safety},
        {2, "axiom suite", 60.0, axiom_suite},
        {3, "instruments are CPTP", 120.0, cptp},
        {4, "interpreter agrees with denotation", 120.0, oracle_agreement},
        {5, "teleportation end to end", 10.0, teleport},
        {6, "progress and preservation", 60.0, progress_preservation},
        {7, "simplifier soundness", 60.0, simplifier},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs < c.limit_s;
        bool ok = o.pass && in_time;
        if (!ok) ++failures;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.limit_s);
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- " << o.detail << " ["
                  << timing << (in_time ? "" : " EXCEEDED") << "]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
