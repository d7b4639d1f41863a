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

#include "lqs/gen/generators.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "lqs/core/desugar.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/gates/gateset.hpp"

namespace lqs::gen {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

GatePtr leaf_gate(Rng& rng, std::size_t arity) {
    if (arity == 0) return mk::identity(1);
    if (arity == 1) {
        static constexpr GateName names[] = {GateName::X, GateName::Y, GateName::Z, GateName::H,
                                             GateName::S, GateName::T, GateName::I};
        GateName n = names[uniform(rng, 0, 6)];
        return n == GateName::I ? mk::identity(2) : mk::named(n);
    }
    if (arity == 2 && chance(rng, 0.75)) return mk::named(GateName::Swap);
    return mk::identity(std::size_t{1} << arity);
}

}  // namespace

GatePtr random_gate(Rng& rng, std::size_t arity, std::size_t depth) {
    if (depth <= 1) return leaf_gate(rng, arity);
    // Multi-qubit leaves are mostly identities, so prefer composite forms there.
    std::size_t pick = uniform(rng, 0, arity >= 2 ? 4 : 3);
    switch (pick) {
        case 0: return arity <= 1 && chance(rng, 0.5) ? leaf_gate(rng, arity) : mk::adjoint(random_gate(rng, arity, depth - 1));
        case 1: return mk::product(random_gate(rng, arity, depth - 1), random_gate(rng, arity, depth - 1));
        case 2:
            if (arity == 0) return leaf_gate(rng, arity);
            return mk::diag(random_gate(rng, arity - 1, depth - 1), random_gate(rng, arity - 1, depth - 1));
        case 3:
            if (arity < 2) return leaf_gate(rng, arity);
            [[fallthrough]];
        default: {
            if (arity < 2) return leaf_gate(rng, arity);
            std::size_t hi = uniform(rng, 1, arity - 1);
            return mk::tensor(random_gate(rng, hi, depth - 1), random_gate(rng, arity - hi, depth - 1));
        }
    }
}

GatePtr random_identity_gate(Rng& rng, std::size_t arity, std::size_t depth) {
    if (depth < 3 || chance(rng, 0.5)) return mk::identity(std::size_t{1} << arity);
    GatePtr g = random_gate(rng, arity, depth - 2);
    return chance(rng, 0.5) ? mk::product(mk::adjoint(g), g) : mk::product(g, mk::adjoint(g));
}

// ---------------------------------------------------------------- programs

namespace {

struct QVar {
    std::string name;
    QubitSymbol sym;
};

class ProgramGen {
public:
    ProgramGen(Rng& rng, const ProgramOptions& opts) : rng_(rng), opts_(opts) {
        for (const auto& c : opts.context) qubits_.push_back({c.var, c.sym});
        meas_left_ = opts.max_meas;
    }

    CmdPtr program() {
        std::size_t width = opts_.shape == ResultShape::BoolTuple ? uniform(rng_, 2, 3) : 1;
        return seq(opts_.max_depth, opts_.shape, width);
    }

    CmdPtr escaping() {
        // Build a prefix, then allocate and leak.
        escape_ = true;
        return seq(std::max<std::size_t>(opts_.max_depth, 3), ResultShape::Unit, 1);
    }

private:
    std::string fresh(const char* base) { return std::string(base) + std::to_string(counter_++); }

    // A command of the requested shape using at most `depth` actions.
    CmdPtr seq(std::size_t depth, ResultShape shape, std::size_t width) {
        if (escape_ && !escaped_ && (depth <= 2 || chance(rng_, 0.3))) return leak(depth, shape, width);
        if (depth == 0 || chance(rng_, 0.08)) return finish(shape, width);
        for (int attempt = 0; attempt < 8; ++attempt) {
            switch (uniform(rng_, 0, 9)) {
                case 0:
                case 1:
                    if (qubits_.size() < opts_.max_qubits) return allocate(depth, shape, width);
                    break;
                case 2:
                case 3:
                    if (!qubits_.empty()) return then(gate_action(), depth, shape, width);
                    break;
                case 4:
                    if (qubits_.size() >= 2) return then(diag_action(), depth, shape, width);
                    break;
                case 5:
                    if (!qubits_.empty() && meas_left_ > 0) return measure(depth, shape, width);
                    break;
                case 6:
                    if (!bools_.empty() && depth >= 2) return branch(depth, shape, width);
                    break;
                case 7:
                    if (!qubits_.empty()) return procedure(depth, shape, width);
                    break;
                case 8: return pure_bind(depth, shape, width);
                case 9:
                    if (opts_.fresh_meas_rate > 0 && chance(rng_, opts_.fresh_meas_rate)) return fresh_measure(depth, shape, width);
                    break;
            }
        }
        return finish(shape, width);
    }

    CmdPtr leak(std::size_t depth, ResultShape shape, std::size_t width) {
        escaped_ = true;
        std::string x = fresh("q");
        QubitSymbol s = QubitSymbol::fresh(x);
        qubits_.push_back({x, s});
        CmdPtr body;
        switch (uniform(rng_, 0, 4)) {
            case 0: body = mk::ret(mk::var(x)); break;
            case 1: body = mk::ret(mk::tuple({mk::tt(), mk::var(x)})); break;
            case 2: body = mk::ret(mk::box(mk::meas(mk::var(x)))); break;
            case 3: body = mk::ret(mk::lam("u", mk::unit_t(), mk::box(mk::gate_ap(mk::named(GateName::X), mk::var(x))))); break;
            default: {
                // Leak through a bound variable several steps before the end.
                std::string y = fresh("r");
                body = mk::bnd(mk::box(mk::ret(mk::var(x))), y,
                               mk::seq(gate_action(), mk::ret(mk::tuple({mk::var(y), mk::ff()}))));
                break;
            }
        }
        qubits_.pop_back();
        auto inner = mk::new_(x, body, chance(rng_, 0.5) ? std::optional<QubitSymbol>(s) : std::nullopt);
        // Bury the leaking allocation under a bind so that the escape is not at the top.
        std::string z = fresh("z");
        CmdPtr rest = depth > 1 ? seq(depth - 1, shape, width) : finish(shape, width);
        return mk::bnd(mk::box(inner), z, rest);
    }

    CmdPtr finish(ResultShape shape, std::size_t width) {
        if (escape_ && !escaped_) return leak(0, shape, width);
        switch (shape) {
            case ResultShape::Unit: return mk::ret(mk::unit());
            case ResultShape::Bool: return mk::ret(result_bool());
            case ResultShape::BoolTuple: {
                std::vector<ExprPtr> items;
                for (std::size_t i = 0; i < width; ++i) items.push_back(result_bool());
                return mk::ret(mk::tuple(std::move(items)));
            }
        }
        return mk::ret(mk::unit());
    }

    // Measured outcomes are preferred so that results carry randomness.
    ExprPtr result_bool() {
        if (!measured_.empty() && chance(rng_, 0.7)) return mk::var(measured_[uniform(rng_, 0, measured_.size() - 1)]);
        return bool_expr(2);
    }

    ExprPtr bool_var_or_const() {
        if (!bools_.empty() && chance(rng_, 0.75)) return mk::var(bools_[uniform(rng_, 0, bools_.size() - 1)]);
        return mk::boolean(chance(rng_, 0.5));
    }

    // A pure boolean expression over the bound booleans.
    ExprPtr bool_expr(int depth) {
        if (depth <= 0) return bool_var_or_const();
        switch (uniform(rng_, 0, 5)) {
            case 0: return mk::if_(bool_expr(depth - 1), bool_expr(depth - 1), bool_expr(depth - 1));
            case 1: {
                std::size_t n = uniform(rng_, 1, 3);
                std::size_t i = uniform(rng_, 1, n);
                std::vector<ExprPtr> items;
                for (std::size_t k = 0; k < n; ++k) items.push_back(bool_expr(depth - 1));
                return mk::proj(i, mk::tuple(std::move(items)));
            }
            case 2: {
                std::string v = fresh("v");
                return mk::let(bool_expr(depth - 1), v,
                               chance(rng_, 0.5) ? mk::var(v) : mk::if_(mk::var(v), mk::ff(), mk::tt()));
            }
            case 3: {
                std::string v = fresh("v");
                return mk::app(mk::lam(v, mk::bool_t(), mk::if_(mk::var(v), bool_expr(0), bool_expr(0))),
                               bool_expr(depth - 1));
            }
            default: return bool_var_or_const();
        }
    }

    // Sequencing, in core or block form.
    CmdPtr then(CmdPtr first, std::size_t depth, ResultShape shape, std::size_t width) {
        CmdPtr rest = seq(depth - 1, shape, width);
        if (opts_.use_sugar && chance(rng_, 0.4)) return mk::block({{std::nullopt, first}}, rest);
        return mk::seq(first, rest);
    }

    CmdPtr allocate(std::size_t depth, ResultShape shape, std::size_t width) {
        std::string x = fresh("q");
        QubitSymbol s = QubitSymbol::fresh("s" + x.substr(1));
        qubits_.push_back({x, s});
        CmdPtr body = seq(depth - 1, shape, width);
        qubits_.pop_back();
        return mk::new_(x, body, s);
    }

    std::vector<std::size_t> pick_distinct(std::size_t k) {
        std::vector<std::size_t> idx(qubits_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng_);
        idx.resize(k);
        return idx;
    }

    ExprPtr ref_args(const std::vector<std::size_t>& idx) {
        if (idx.size() == 1) return mk::var(qubits_[idx[0]].name);
        std::vector<ExprPtr> items;
        for (auto i : idx) items.push_back(mk::var(qubits_[i].name));
        return mk::tuple(std::move(items));
    }

    GatePtr some_gate(std::size_t arity) {
        if (opts_.identity_rate > 0 && chance(rng_, opts_.identity_rate))
            return random_identity_gate(rng_, arity, opts_.gate_depth + 2);
        return random_gate(rng_, arity, opts_.gate_depth);
    }

    CmdPtr gate_action() {
        std::size_t k = uniform(rng_, 1, std::min<std::size_t>(qubits_.size(), 3));
        auto idx = pick_distinct(k);
        auto g = some_gate(k);
        if (opts_.use_sugar && chance(rng_, 0.15))
            return mk::call(mk::gate_const(g), ref_args(idx));
        return mk::gate_ap(g, ref_args(idx));
    }

    CmdPtr diag_action() {
        std::size_t k = uniform(rng_, 1, std::min<std::size_t>(qubits_.size() - 1, 2));
        auto idx = pick_distinct(k + 1);
        std::vector<std::size_t> targets(idx.begin() + 1, idx.end());
        return mk::diag_ap(some_gate(k), some_gate(k), mk::var(qubits_[idx[0]].name), ref_args(targets));
    }

    CmdPtr measure(std::size_t depth, ResultShape shape, std::size_t width) {
        --meas_left_;
        const auto& q = qubits_[uniform(rng_, 0, qubits_.size() - 1)];
        std::string b = fresh("b");
        CmdPtr first = mk::meas(mk::var(q.name));
        CmdPtr prep;
        if (chance(rng_, 0.5)) prep = mk::gate_ap(mk::named(GateName::H), mk::var(q.name));
        bools_.push_back(b);
        measured_.push_back(b);
        CmdPtr rest = seq(depth - 1, shape, width);
        measured_.pop_back();
        bools_.pop_back();
        CmdPtr out;
        if (opts_.use_sugar && chance(rng_, 0.3)) {
            out = mk::block({{b, first}}, rest);
        } else {
            out = mk::bind(b, first, rest);
        }
        return prep ? mk::seq(prep, out) : out;
    }

    CmdPtr fresh_measure(std::size_t depth, ResultShape shape, std::size_t width) {
        if (qubits_.size() >= opts_.max_qubits || meas_left_ == 0) return finish(shape, width);
        --meas_left_;
        std::string a = fresh("f");
        std::string b = fresh("b");
        CmdPtr probe = mk::new_(a, mk::meas(mk::var(a)));
        bools_.push_back(b);
        CmdPtr rest = seq(depth - 1, shape, width);
        bools_.pop_back();
        return mk::bind(b, probe, rest);
    }

    // bnd (if b then cmd m1 else cmd m2) as y in rest
    CmdPtr branch(std::size_t depth, ResultShape shape, std::size_t width) {
        ExprPtr cond = mk::var(bools_[uniform(rng_, 0, bools_.size() - 1)]);
        ResultShape inner = chance(rng_, 0.5) ? ResultShape::Bool : ResultShape::Unit;
        std::size_t sub = std::min<std::size_t>(depth - 1, 3);
        CmdPtr m1 = seq(sub, inner, 1);
        CmdPtr m2 = seq(sub, inner, 1);
        std::string y = fresh(inner == ResultShape::Bool ? "b" : "u");
        if (inner == ResultShape::Bool) bools_.push_back(y);
        CmdPtr rest = seq(depth - 1, shape, width);
        if (inner == ResultShape::Bool) bools_.pop_back();
        return mk::bnd(mk::if_(cond, mk::box(m1), mk::box(m2)), y, rest);
    }

    // A one-qubit procedure applied to a qubit in scope.
    CmdPtr procedure(std::size_t depth, ResultShape shape, std::size_t width) {
        const QVar target = qubits_[uniform(rng_, 0, qubits_.size() - 1)];
        std::string p = fresh("p");
        std::string f = fresh("f");
        // The body sees only its parameter.
        auto saved_q = qubits_;
        auto saved_b = bools_;
        qubits_ = {{p, target.sym}};
        bools_.clear();
        CmdPtr body = seq(std::min<std::size_t>(depth - 1, 2), ResultShape::Unit, 1);
        qubits_ = std::move(saved_q);
        bools_ = std::move(saved_b);
        TypePtr annot = mk::qref(target.sym);
        std::string r = fresh("u");
        CmdPtr rest = seq(depth - 1, shape, width);
        switch (uniform(rng_, 0, opts_.use_sugar ? 2 : 1)) {
            case 0: return mk::bnd(mk::app(mk::lam(p, annot, mk::box(body)), mk::var(target.name)), r, rest);
            case 1:
                return mk::bnd(mk::let(mk::lam(p, annot, mk::box(body)), f, mk::app(mk::var(f), mk::var(target.name))),
                               r, rest);
            default: return mk::block({{r, mk::call(mk::proc(p, annot, body), mk::var(target.name))}}, rest);
        }
    }

    CmdPtr pure_bind(std::size_t depth, ResultShape shape, std::size_t width) {
        std::string y = fresh("b");
        ExprPtr e = bool_expr(2);
        bools_.push_back(y);
        CmdPtr rest = seq(depth - 1, shape, width);
        bools_.pop_back();
        return mk::bnd(mk::box(mk::ret(e)), y, rest);
    }

    Rng& rng_;
    const ProgramOptions& opts_;
    std::vector<QVar> qubits_;
    std::vector<std::string> bools_;
    std::size_t meas_left_ = 0;
    std::vector<std::string> measured_;
    std::size_t counter_ = 0;
    bool escape_ = false;
    bool escaped_ = false;
};

bool identity_like(const GatePtr& g) {
    try {
        return is_identity_up_to_phase(mat_of_gate(g).matrix(), 1e-9);
    } catch (const GateError&) {
        return false;
    }
}

template <class F>
void walk(const CmdPtr& m, const F& on_cmd);

template <class F>
void walk(const ExprPtr& e, const F& on_cmd) {
    std::visit(overloaded{
                   [&](const ex::Let& n) {
                       walk(n.bound, on_cmd);
                       walk(n.body, on_cmd);
                   },
                   [&](const ex::Lam& n) { walk(n.body, on_cmd); },
                   [&](const ex::App& n) {
                       if (const auto* g = as<ex::GateConst>(n.fn)) on_cmd(mk::gate_ap(g->gate, n.arg));
                       walk(n.fn, on_cmd);
                       walk(n.arg, on_cmd);
                   },
                   [&](const ex::Box& n) { walk(n.cmd, on_cmd); },
                   [&](const ex::Tuple& n) {
                       for (const auto& i : n.items) walk(i, on_cmd);
                   },
                   [&](const ex::Proj& n) { walk(n.tuple, on_cmd); },
                   [&](const ex::If& n) {
                       walk(n.cond, on_cmd);
                       walk(n.then_branch, on_cmd);
                       walk(n.else_branch, on_cmd);
                   },
                   [&](const ex::Proc& n) { walk(n.body, on_cmd); },
                   [&](const auto&) {},
               },
               e->node);
}

template <class F>
void walk(const CmdPtr& m, const F& on_cmd) {
    on_cmd(m);
    std::visit(overloaded{
                   [&](const cm::Ret& n) { walk(n.value, on_cmd); },
                   [&](const cm::Bnd& n) {
                       walk(n.boxed, on_cmd);
                       walk(n.rest, on_cmd);
                   },
                   [&](const cm::New& n) { walk(n.body, on_cmd); },
                   [&](const cm::GateAp& n) { walk(n.args, on_cmd); },
                   [&](const cm::DiagAp& n) {
                       walk(n.control, on_cmd);
                       walk(n.targets, on_cmd);
                   },
                   [&](const cm::Meas& n) { walk(n.target, on_cmd); },
                   [&](const cm::Scope& n) { walk(n.body, on_cmd); },
                   [&](const cm::Block& n) {
                       for (const auto& i : n.items) walk(i.cmd, on_cmd);
                       walk(n.last, on_cmd);
                   },
                   [&](const cm::Do& n) { walk(n.body, on_cmd); },
                   [&](const cm::Call& n) {
                       walk(n.fn, on_cmd);
                       if (n.arg) walk(n.arg, on_cmd);
                   },
               },
               m->node);
}

}  // namespace

CmdPtr random_program(Rng& rng, const ProgramOptions& opts) { return ProgramGen(rng, opts).program(); }

CmdPtr random_escaping_program(Rng& rng, const ProgramOptions& opts) { return ProgramGen(rng, opts).escaping(); }

std::size_t count_identity_gates(const CmdPtr& m0) {
    std::size_t count = 0;
    CmdPtr m = desugar(m0);
    walk(m, [&](const CmdPtr& c) {
        if (const auto* g = as<cm::GateAp>(c)) {
            if (identity_like(g->gate)) ++count;
        } else if (const auto* d = as<cm::DiagAp>(c)) {
            if (identity_like(d->zero) && identity_like(d->one) &&
                phase_distance(mat_of_gate(d->zero).matrix(), mat_of_gate(d->one).matrix()) <= 1e-9)
                ++count;
        }
    });
    return count;
}

std::size_t count_fresh_measurements(const CmdPtr& m0) {
    std::size_t count = 0;
    CmdPtr m = desugar(m0);
    walk(m, [&](const CmdPtr& c) {
        const auto* n = as<cm::New>(c);
        if (!n) return;
        auto measures_binder = [&](const CmdPtr& x) {
            const auto* me = as<cm::Meas>(x);
            if (!me) return false;
            const auto* v = as<ex::Var>(me->target);
            return v && v->name == n->binder;
        };
        if (measures_binder(n->body)) {
            ++count;
            return;
        }
        if (const auto* b = as<cm::Bnd>(n->body)) {
            const auto* box = as<ex::Box>(b->boxed);
            if (box && measures_binder(box->cmd)) ++count;
        }
    });
    return count;
}

}  // namespace lqs::gen
