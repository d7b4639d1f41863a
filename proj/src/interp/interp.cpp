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

#include "lqs/interp/interp.hpp"

#include <memory>

#include "lqs/core/desugar.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"

namespace lqs {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool sample(std::mt19937_64& rng, double p1) { return uniform01(rng) < p1; }

double probability_one(const QuantumStore& store, const QubitSymbol& q) {
    double t = store.trace();
    if (t <= 0) throw InterpError("measurement on a zero state");
    return store.weight(q, true) / t;
}

}  // namespace

bool SamplingMeasurer::measure(QuantumStore& store, const QubitSymbol& q) {
    bool b = sample(rng_, probability_one(store, q));
    store.project(q, b);
    store.normalize();
    return b;
}

bool ForcedMeasurer::measure(QuantumStore& store, const QubitSymbol& q) {
    store.project(q, outcome_);
    if (renormalize_) store.normalize();
    return outcome_;
}

bool ProbeMeasurer::measure(QuantumStore&, const QubitSymbol& q) {
    requested_ = true;
    qubit_ = q;
    return false;
}

const Matrix& GateCache::get(const GatePtr& g) {
    auto it = cache_.find(g.get());
    if (it != cache_.end()) return it->second.second;
    return cache_.emplace(g.get(), std::make_pair(g, mat_of_gate(g).matrix())).first->second.second;
}

// ---------------------------------------------------------------- expressions

StepResult step_expr(const ExprPtr& e) {
    using R = StepResult;
    return std::visit(
        overloaded{
            [&](const ex::Var& n) { return R::stuck("free variable " + n.name); },
            [&](const ex::Let& n) {
                if (!is_value(n.bound)) {
                    auto r = step_expr(n.bound);
                    if (r.kind != R::Kind::Stepped) return r;
                    return R::stepped(mk::let(r.expr, n.binder, n.body, e->loc));
                }
                return R::stepped(subst(n.bound, n.binder, n.body));
            },
            [&](const ex::App& n) {
                if (!is_value(n.fn)) {
                    auto r = step_expr(n.fn);
                    if (r.kind != R::Kind::Stepped) return r;
                    return R::stepped(mk::app(r.expr, n.arg, e->loc));
                }
                if (!is_value(n.arg)) {
                    auto r = step_expr(n.arg);
                    if (r.kind != R::Kind::Stepped) return r;
                    return R::stepped(mk::app(n.fn, r.expr, e->loc));
                }
                if (const auto* lam = as<ex::Lam>(n.fn)) return R::stepped(subst(n.arg, lam->binder, lam->body));
                if (const auto* gc = as<ex::GateConst>(n.fn))
                    return R::stepped(mk::box(mk::gate_ap(gc->gate, n.arg, e->loc), e->loc));
                if (as<ex::Proc>(n.fn)) return R::stepped(mk::app(desugar(n.fn), n.arg, e->loc));
                return R::stuck("application of a non-function value");
            },
            [&](const ex::Tuple& n) {
                for (std::size_t i = 0; i < n.items.size(); ++i) {
                    if (is_value(n.items[i])) continue;
                    auto r = step_expr(n.items[i]);
                    if (r.kind != R::Kind::Stepped) return r;
                    auto items = n.items;
                    items[i] = r.expr;
                    return R::stepped(mk::tuple(std::move(items), e->loc));
                }
                return R::final(e);
            },
            [&](const ex::Proj& n) {
                if (!is_value(n.tuple)) {
                    auto r = step_expr(n.tuple);
                    if (r.kind != R::Kind::Stepped) return r;
                    return R::stepped(mk::proj(n.index, r.expr, e->loc));
                }
                ExprPtr cur = n.tuple;
                while (const auto* t = as<ex::Tuple>(cur)) {
                    if (t->items.size() == 1 && n.index != 1) {
                        cur = t->items[0];
                        continue;
                    }
                    if (n.index > t->items.size()) return R::stuck("projection out of range");
                    return R::stepped(t->items[n.index - 1]);
                }
                if (n.index == 1) return R::stepped(cur);
                return R::stuck("projection from a non-tuple value");
            },
            [&](const ex::If& n) {
                if (!is_value(n.cond)) {
                    auto r = step_expr(n.cond);
                    if (r.kind != R::Kind::Stepped) return r;
                    return R::stepped(mk::if_(r.expr, n.then_branch, n.else_branch, e->loc));
                }
                ExprPtr c = n.cond;
                while (const auto* t = as<ex::Tuple>(c)) {
                    if (t->items.size() != 1) break;
                    c = t->items[0];
                }
                const auto* b = as<ex::Bool>(c);
                if (!b) return R::stuck("if on a non-boolean value");
                return R::stepped(b->value ? n.then_branch : n.else_branch);
            },
            [&](const ex::Proc&) { return R::stepped(desugar(e)); },
            [&](const auto&) { return R::final(e); },
        },
        e->node);
}

ExprPtr evaluate(const ExprPtr& e, std::size_t step_limit) {
    ExprPtr cur = e;
    for (std::size_t i = 0; i < step_limit; ++i) {
        auto r = step_expr(cur);
        if (r.kind == StepResult::Kind::Final) return r.expr;
        if (r.kind == StepResult::Kind::Stuck) throw InterpError("stuck: " + r.reason);
        cur = r.expr;
    }
    throw InterpError("step limit exceeded");
}

// ---------------------------------------------------------------- commands

namespace {

// Symbols of a reference-valued argument: qloc[q] or a (nested singleton)
// tuple of them.
bool reference_symbols(const ExprPtr& v, std::vector<QubitSymbol>& out) {
    if (const auto* q = as<ex::QLoc>(v)) {
        out.push_back(q->sym);
        return true;
    }
    const auto* t = as<ex::Tuple>(v);
    if (!t) return false;
    if (t->items.size() == 1) return reference_symbols(t->items[0], out);
    for (const auto& i : t->items) {
        ExprPtr cur = i;
        while (const auto* s = as<ex::Tuple>(cur)) {
            if (s->items.size() != 1) return false;
            cur = s->items[0];
        }
        const auto* q = as<ex::QLoc>(cur);
        if (!q) return false;
        out.push_back(q->sym);
    }
    return true;
}

const Matrix& gate_matrix(const GatePtr& g, GateCache* cache, Matrix& scratch) {
    if (cache) return cache->get(g);
    scratch = mat_of_gate(g).matrix();
    return scratch;
}

StepResult apply_gate(QuantumStore& store, const GatePtr& g, const std::vector<QubitSymbol>& qs, GateCache* cache,
                      SourceLoc loc) {
    for (const auto& q : qs)
        if (!store.is_live(q)) return StepResult::stuck("qubit " + q.name() + " is not live");
    Matrix scratch;
    const Matrix& u = gate_matrix(g, cache, scratch);
    if (static_cast<std::size_t>(u.rows()) != (std::size_t{1} << qs.size()))
        return StepResult::stuck("gate arity does not match its arguments");
    store.apply(u, qs);
    return StepResult::stepped(mk::ret(mk::unit(loc), loc));
}

}  // namespace

StepResult step_cmd(QuantumStore& store, const CmdPtr& m, Measurer& measurer, GateCache* cache) {
    using R = StepResult;
    auto step_inner = [&](const ExprPtr& e, auto rebuild) -> R {
        auto r = step_expr(e);
        if (r.kind != R::Kind::Stepped) return r.kind == R::Kind::Stuck ? r : R::stuck("value expected to step");
        return R::stepped(rebuild(r.expr));
    };
    return std::visit(
        overloaded{
            [&](const cm::Ret& n) -> R {
                if (is_value(n.value)) return R::final(n.value);
                return step_inner(n.value, [&](ExprPtr v) { return mk::ret(v, m->loc); });
            },
            [&](const cm::Bnd& n) -> R {
                if (!is_value(n.boxed))
                    return step_inner(n.boxed, [&](ExprPtr v) { return mk::bnd(v, n.binder, n.rest, m->loc); });
                const auto* box = as<ex::Box>(n.boxed);
                if (!box) return R::stuck("bnd of a non-command value");
                auto r = step_cmd(store, box->cmd, measurer, cache);
                if (r.kind == R::Kind::Final) return R::stepped(subst(r.expr, n.binder, n.rest));
                if (r.kind == R::Kind::Stuck) return r;
                return R::stepped(mk::bnd(mk::box(r.cmd, n.boxed->loc), n.binder, n.rest, m->loc));
            },
            [&](const cm::New& n) -> R {
                QubitSymbol q = QubitSymbol::fresh(n.sym ? n.sym->name() : n.binder);
                store.allocate(q);
                CmdPtr body = n.sym ? rename_symbol(n.body, *n.sym, q) : n.body;
                body = subst(mk::qloc(q, m->loc), n.binder, body);
                return R::stepped(mk::scope(q, body, m->loc));
            },
            [&](const cm::Scope& n) -> R {
                auto r = step_cmd(store, n.body, measurer, cache);
                if (r.kind == R::Kind::Final) {
                    store.release(n.sym);
                    return R::stepped(mk::ret(r.expr, m->loc));
                }
                if (r.kind == R::Kind::Stuck) return r;
                return R::stepped(mk::scope(n.sym, r.cmd, m->loc));
            },
            [&](const cm::GateAp& n) -> R {
                if (!is_value(n.args))
                    return step_inner(n.args, [&](ExprPtr v) { return mk::gate_ap(n.gate, v, m->loc); });
                std::vector<QubitSymbol> qs;
                if (!reference_symbols(n.args, qs)) return R::stuck("gate argument is not a qubit reference");
                return apply_gate(store, n.gate, qs, cache, m->loc);
            },
            [&](const cm::DiagAp& n) -> R {
                if (!is_value(n.control))
                    return step_inner(n.control,
                                      [&](ExprPtr v) { return mk::diag_ap(n.zero, n.one, v, n.targets, m->loc); });
                if (!is_value(n.targets))
                    return step_inner(n.targets,
                                      [&](ExprPtr v) { return mk::diag_ap(n.zero, n.one, n.control, v, m->loc); });
                std::vector<QubitSymbol> qs;
                if (!reference_symbols(n.control, qs) || qs.size() != 1)
                    return R::stuck("control is not a single qubit reference");
                if (!reference_symbols(n.targets, qs)) return R::stuck("targets are not qubit references");
                return apply_gate(store, mk::diag(n.zero, n.one), qs, nullptr, m->loc);
            },
            [&](const cm::Meas& n) -> R {
                if (!is_value(n.target))
                    return step_inner(n.target, [&](ExprPtr v) { return mk::meas(v, m->loc); });
                std::vector<QubitSymbol> qs;
                if (!reference_symbols(n.target, qs) || qs.size() != 1)
                    return R::stuck("meas of a non-reference value");
                if (!store.is_live(qs[0])) return R::stuck("qubit " + qs[0].name() + " is not live");
                bool b = measurer.measure(store, qs[0]);
                return R::stepped(mk::ret(mk::boolean(b, m->loc), m->loc));
            },
            [&](const auto&) -> R { return R::stepped(desugar(m)); },
        },
        m->node);
}

Execution execute(const CmdPtr& m, QuantumStore& store, Measurer& measurer, const ExecOptions& opts) {
    // Wraps the caller's measurer to record outcomes.
    struct Recording final : Measurer {
        Measurer& inner;
        std::vector<bool>& log;
        Recording(Measurer& i, std::vector<bool>& l) : inner(i), log(l) {}
        bool measure(QuantumStore& s, const QubitSymbol& q) override {
            bool b = inner.measure(s, q);
            log.push_back(b);
            return b;
        }
    };
    Execution ex;
    Recording rec(measurer, ex.transcript);
    GateCache cache;
    CmdPtr cur = m;
    for (; ex.steps < opts.step_limit; ++ex.steps) {
        if (opts.observer) opts.observer(cur, store);
        auto r = step_cmd(store, cur, rec, &cache);
        if (r.kind == StepResult::Kind::Final) {
            ex.value = r.expr;
            return ex;
        }
        if (r.kind == StepResult::Kind::Stuck) throw InterpError("stuck: " + r.reason);
        cur = r.cmd;
    }
    throw InterpError("step limit exceeded");
}

std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t shot) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (shot + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

// Unit and the empty tuple print alike, as do a singleton tuple and its item.
ExprPtr canonical_value(const ExprPtr& v) {
    const auto* t = as<ex::Tuple>(v);
    if (!t) return v;
    if (t->items.empty()) return mk::unit();
    if (t->items.size() == 1) return canonical_value(t->items[0]);
    std::vector<ExprPtr> items;
    for (const auto& i : t->items) items.push_back(canonical_value(i));
    return mk::tuple(std::move(items));
}

}  // namespace

std::string value_key(const ExprPtr& v) { return print(canonical_value(v)); }

namespace {

// Execution tree keyed by measurement outcomes. Each node holds the state
// just before a measurement, or the final value.
struct ShotNode {
    CmdPtr term;
    QuantumStore store;
    ExprPtr value;  // set when final
    QubitSymbol qubit;
    double p1 = 0;
    std::unique_ptr<ShotNode> child[2];
};

constexpr std::size_t kRunStepLimit = 1'000'000;

std::unique_ptr<ShotNode> advance(CmdPtr term, QuantumStore store, GateCache& cache) {
    ProbeMeasurer probe;
    for (std::size_t i = 0; i < kRunStepLimit; ++i) {
        probe.reset();
        auto r = step_cmd(store, term, probe, &cache);
        if (probe.requested()) {
            auto node = std::make_unique<ShotNode>(ShotNode{term, std::move(store), nullptr, probe.qubit(), 0, {}});
            node->p1 = probability_one(node->store, node->qubit);
            return node;
        }
        if (r.kind == StepResult::Kind::Final)
            return std::make_unique<ShotNode>(ShotNode{term, std::move(store), r.expr, {}, 0, {}});
        if (r.kind == StepResult::Kind::Stuck) throw InterpError("stuck: " + r.reason);
        term = r.cmd;
    }
    throw InterpError("step limit exceeded");
}

ShotNode& child(ShotNode& node, bool b, GateCache& cache) {
    auto& slot = node.child[b ? 1 : 0];
    if (!slot) {
        QuantumStore store = node.store;
        ForcedMeasurer forced(b, true);
        auto r = step_cmd(store, node.term, forced, &cache);
        if (r.kind != StepResult::Kind::Stepped) throw InterpError("measurement step did not advance");
        slot = advance(r.cmd, std::move(store), cache);
    }
    return *slot;
}

}  // namespace

RunReport run(const CmdPtr& m0, const RunOptions& opts) {
    CmdPtr m = desugar(m0);
    if (!free_vars(m).empty()) throw InterpError("program has free variables: " + *free_vars(m).begin());
    RunReport report;
    report.shots = opts.shots;
    if (!opts.memoize) {
        for (std::size_t s = 0; s < opts.shots; ++s) {
            QuantumStore store(opts.mode, opts.max_qubits);
            SamplingMeasurer measurer(shot_seed(opts.seed, s));
            auto ex = execute(m, store, measurer);
            ++report.histogram[value_key(ex.value)];
            report.transcripts.push_back(std::move(ex.transcript));
        }
        return report;
    }
    GateCache cache;
    auto root = advance(m, QuantumStore(opts.mode, opts.max_qubits), cache);
    for (std::size_t s = 0; s < opts.shots; ++s) {
        std::mt19937_64 rng(shot_seed(opts.seed, s));
        std::vector<bool> transcript;
        ShotNode* node = root.get();
        while (!node->value) {
            bool b = sample(rng, node->p1);
            transcript.push_back(b);
            node = &child(*node, b, cache);
        }
        ++report.histogram[value_key(node->value)];
        report.transcripts.push_back(std::move(transcript));
    }
    return report;
}

}  // namespace lqs
