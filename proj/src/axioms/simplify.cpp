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

#include <exception>
#include <unordered_map>

#include "lqs/axioms/axioms.hpp"
#include "lqs/core/desugar.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/gates/gateset.hpp"

namespace lqs {

namespace {

struct BudgetExceeded : std::exception {};

bool substitutable(const ExprPtr& e) { return as<ex::Var>(e) || is_value(e); }

bool mentions(const CmdPtr& m, const std::string& x) { return free_vars(m).count(x) != 0; }

class Simplifier {
public:
    explicit Simplifier(const SimplifyOptions& opts) : opts_(opts) {}

    std::size_t rewrites() const { return rewrites_; }

    ExprPtr expr(const ExprPtr& e) {
        ExprPtr cur = children(e);
        while (true) {
            ExprPtr next = rule(cur);
            if (next == cur) return cur;
            tick();
            cur = expr(next);
        }
    }

    CmdPtr cmd(const CmdPtr& m) {
        CmdPtr cur = children(m);
        while (true) {
            CmdPtr next = rule(cur);
            if (next == cur) return cur;
            tick();
            cur = cmd(next);
        }
    }

private:
    void tick() {
        if (++rewrites_ > opts_.budget) throw BudgetExceeded{};
    }

    bool is_identity(const GatePtr& g) {
        auto it = identity_.find(g.get());
        if (it != identity_.end()) return it->second.second;
        bool id = false;
        try {
            id = is_identity_up_to_phase(mat_of_gate(g).matrix(), opts_.tol);
        } catch (const GateError&) {
        }
        identity_.emplace(g.get(), std::make_pair(g, id));
        return id;
    }

    // ---------------------------------------------------------------- congruence

    ExprPtr children(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ex::Let& n) -> ExprPtr {
                    auto b = expr(n.bound);
                    auto body = expr(n.body);
                    return b == n.bound && body == n.body ? e : mk::let(b, n.binder, body, e->loc);
                },
                [&](const ex::Lam& n) -> ExprPtr {
                    auto body = expr(n.body);
                    return body == n.body ? e : mk::lam(n.binder, n.annot, body, e->loc);
                },
                [&](const ex::App& n) -> ExprPtr {
                    auto f = expr(n.fn);
                    auto a = expr(n.arg);
                    return f == n.fn && a == n.arg ? e : mk::app(f, a, e->loc);
                },
                [&](const ex::Box& n) -> ExprPtr {
                    auto c = cmd(n.cmd);
                    return c == n.cmd ? e : mk::box(c, e->loc);
                },
                [&](const ex::Tuple& n) -> ExprPtr {
                    std::vector<ExprPtr> items;
                    bool changed = false;
                    for (const auto& i : n.items) {
                        items.push_back(expr(i));
                        changed |= items.back() != i;
                    }
                    return changed ? mk::tuple(std::move(items), e->loc) : e;
                },
                [&](const ex::Proj& n) -> ExprPtr {
                    auto t = expr(n.tuple);
                    return t == n.tuple ? e : mk::proj(n.index, t, e->loc);
                },
                [&](const ex::If& n) -> ExprPtr {
                    auto c = expr(n.cond);
                    auto a = expr(n.then_branch);
                    auto b = expr(n.else_branch);
                    return c == n.cond && a == n.then_branch && b == n.else_branch ? e : mk::if_(c, a, b, e->loc);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    CmdPtr children(const CmdPtr& m) {
        return std::visit(
            overloaded{
                [&](const cm::Ret& n) -> CmdPtr {
                    auto v = expr(n.value);
                    return v == n.value ? m : mk::ret(v, m->loc);
                },
                [&](const cm::Bnd& n) -> CmdPtr {
                    auto b = expr(n.boxed);
                    auto r = cmd(n.rest);
                    return b == n.boxed && r == n.rest ? m : mk::bnd(b, n.binder, r, m->loc);
                },
                [&](const cm::New& n) -> CmdPtr {
                    auto b = cmd(n.body);
                    return b == n.body ? m : mk::new_(n.binder, b, n.sym, m->loc);
                },
                [&](const cm::GateAp& n) -> CmdPtr {
                    auto a = expr(n.args);
                    return a == n.args ? m : mk::gate_ap(n.gate, a, m->loc);
                },
                [&](const cm::DiagAp& n) -> CmdPtr {
                    auto c = expr(n.control);
                    auto t = expr(n.targets);
                    return c == n.control && t == n.targets ? m : mk::diag_ap(n.zero, n.one, c, t, m->loc);
                },
                [&](const cm::Meas& n) -> CmdPtr {
                    auto t = expr(n.target);
                    return t == n.target ? m : mk::meas(t, m->loc);
                },
                [&](const cm::Scope& n) -> CmdPtr {
                    auto b = cmd(n.body);
                    return b == n.body ? m : mk::scope(n.sym, b, m->loc);
                },
                [&](const auto&) -> CmdPtr { return m; },
            },
            m->node);
    }

    // ---------------------------------------------------------------- rules

    ExprPtr rule(const ExprPtr& e) {
        if (const auto* a = as<ex::App>(e)) {
            if (const auto* lam = as<ex::Lam>(a->fn))
                if (substitutable(a->arg)) return subst(a->arg, lam->binder, lam->body);
            if (const auto* g = as<ex::GateConst>(a->fn)) return mk::box(mk::gate_ap(g->gate, a->arg, e->loc), e->loc);
            return e;
        }
        if (const auto* l = as<ex::Let>(e)) {
            if (substitutable(l->bound)) return subst(l->bound, l->binder, l->body);
            return e;
        }
        if (const auto* p = as<ex::Proj>(e)) {
            if (const auto* t = as<ex::Tuple>(p->tuple))
                if (p->index >= 1 && p->index <= t->items.size()) return t->items[p->index - 1];
            return e;
        }
        if (const auto* i = as<ex::If>(e)) {
            if (const auto* b = as<ex::Bool>(i->cond)) return b->value ? i->then_branch : i->else_branch;
            return e;
        }
        return e;
    }

    CmdPtr rule(const CmdPtr& m) {
        if (const auto* g = as<cm::GateAp>(m)) {
            if (opts_.gate_rules && is_identity(g->gate)) return mk::ret(mk::unit(), m->loc);
            return m;
        }
        if (const auto* d = as<cm::DiagAp>(m)) {
            if (opts_.gate_rules && is_identity(mk::diag(d->zero, d->one))) return mk::ret(mk::unit(), m->loc);
            return m;
        }
        if (const auto* b = as<cm::Bnd>(m)) return bnd_rule(m, *b);
        if (const auto* n = as<cm::New>(m)) return new_rule(m, *n);
        return m;
    }

    CmdPtr bnd_rule(const CmdPtr& m, const cm::Bnd& b) {
        const auto* box = as<ex::Box>(b.boxed);
        if (!box) return m;
        const CmdPtr& first = box->cmd;
        // bnd (cmd ret v) as x in m  ->  [v/x]m
        if (const auto* r = as<cm::Ret>(first))
            if (substitutable(r->value)) return subst(r->value, b.binder, b.rest);
        // bnd (cmd m) as x in ret x  ->  m
        if (const auto* r = as<cm::Ret>(b.rest))
            if (const auto* v = as<ex::Var>(r->value); v && v->name == b.binder) return first;
        // Reassociate nested binds.
        if (const auto* inner = as<cm::Bnd>(first)) {
            std::string y = inner->binder;
            CmdPtr m1 = inner->rest;
            if (y != "_" && mentions(b.rest, y)) {
                std::string fresh = fresh_var_name(y);
                m1 = subst(mk::var(fresh), y, m1);
                y = fresh;
            }
            return mk::bnd(inner->boxed, y, mk::bnd(mk::box(m1), b.binder, b.rest, m->loc), m->loc);
        }
        // Fuse U(e); V(e) into prod(V, U)(e).
        if (const auto* g1 = as<cm::GateAp>(first); g1 && opts_.gate_rules) {
            if (mentions(b.rest, b.binder) && b.binder != "_") return m;
            if (const auto* g2 = as<cm::GateAp>(b.rest); g2 && structurally_equal(g1->args, g2->args))
                return mk::gate_ap(mk::product(g2->gate, g1->gate), g1->args, m->loc);
            if (const auto* nb = as<cm::Bnd>(b.rest)) {
                if (const auto* nbox = as<ex::Box>(nb->boxed)) {
                    if (const auto* g2 = as<cm::GateAp>(nbox->cmd); g2 && structurally_equal(g1->args, g2->args)) {
                        auto fused = mk::gate_ap(mk::product(g2->gate, g1->gate), g1->args, m->loc);
                        return mk::bnd(mk::box(fused), nb->binder, nb->rest, m->loc);
                    }
                }
            }
        }
        return m;
    }

    CmdPtr new_rule(const CmdPtr& m, const cm::New& n) {
        auto measures_binder = [&](const CmdPtr& c) {
            const auto* me = as<cm::Meas>(c);
            if (!me) return false;
            const auto* v = as<ex::Var>(me->target);
            return v && v->name == n.binder;
        };
        if (opts_.fold_measurements && measures_binder(n.body)) return mk::ret(mk::ff(), m->loc);
        if (const auto* b = as<cm::Bnd>(n.body); b && opts_.fold_measurements) {
            const auto* box = as<ex::Box>(b->boxed);
            if (box && measures_binder(box->cmd))
                return mk::new_(n.binder, subst(mk::ff(), b->binder, b->rest), n.sym, m->loc);
        }
        bool sym_used = n.sym && free_qubit_symbols(n.body).count(*n.sym);
        if (opts_.drop_allocations && !mentions(n.body, n.binder) && !sym_used) return n.body;
        return m;
    }

    const SimplifyOptions& opts_;
    std::size_t rewrites_ = 0;
    std::unordered_map<const Gate*, std::pair<GatePtr, bool>> identity_;
};

}  // namespace

SimplifyResult simplify(const CmdPtr& m, const SimplifyOptions& opts) {
    Simplifier s(opts);
    try {
        CmdPtr cur = desugar(m);
        while (true) {
            CmdPtr next = s.cmd(cur);
            if (next == cur) break;
            cur = next;
        }
        return {cur, false, s.rewrites()};
    } catch (const BudgetExceeded&) {
        return {m, true, s.rewrites()};
    }
}

}  // namespace lqs
