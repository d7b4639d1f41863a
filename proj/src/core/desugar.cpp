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

#include "lqs/core/desugar.hpp"

namespace lqs {

TypePtr desugar(const TypePtr& t) {
    return std::visit(overloaded{
                          [&](const ty::Arrow& n) -> TypePtr {
                              auto d = desugar(n.dom);
                              auto c = desugar(n.cod);
                              return d == n.dom && c == n.cod ? t : mk::arrow(d, c);
                          },
                          [&](const ty::Cmd& n) -> TypePtr {
                              auto r = desugar(n.ret);
                              return r == n.ret ? t : mk::cmd_t(r);
                          },
                          [&](const ty::Prod& n) -> TypePtr {
                              std::vector<TypePtr> items;
                              bool changed = false;
                              for (const auto& i : n.items) {
                                  items.push_back(desugar(i));
                                  changed |= items.back() != i;
                              }
                              return changed ? mk::prod(std::move(items)) : t;
                          },
                          [&](const ty::Proc& n) -> TypePtr {
                              return mk::arrow(desugar(n.dom), mk::cmd_t(desugar(n.cod)));
                          },
                          [&](const auto&) -> TypePtr { return t; },
                      },
                      t->node);
}

ExprPtr desugar(const ExprPtr& e) {
    return std::visit(
        overloaded{
            [&](const ex::Let& n) -> ExprPtr {
                auto b = desugar(n.bound);
                auto body = desugar(n.body);
                return b == n.bound && body == n.body ? e : mk::let(b, n.binder, body, e->loc);
            },
            [&](const ex::Lam& n) -> ExprPtr {
                auto a = desugar(n.annot);
                auto body = desugar(n.body);
                return a == n.annot && body == n.body ? e : mk::lam(n.binder, a, body, e->loc);
            },
            [&](const ex::App& n) -> ExprPtr {
                auto f = desugar(n.fn);
                auto a = desugar(n.arg);
                return f == n.fn && a == n.arg ? e : mk::app(f, a, e->loc);
            },
            [&](const ex::Box& n) -> ExprPtr {
                auto c = desugar(n.cmd);
                return c == n.cmd ? e : mk::box(c, e->loc);
            },
            [&](const ex::Tuple& n) -> ExprPtr {
                std::vector<ExprPtr> items;
                bool changed = false;
                for (const auto& i : n.items) {
                    items.push_back(desugar(i));
                    changed |= items.back() != i;
                }
                return changed ? mk::tuple(std::move(items), e->loc) : e;
            },
            [&](const ex::Proj& n) -> ExprPtr {
                auto t = desugar(n.tuple);
                return t == n.tuple ? e : mk::proj(n.index, t, e->loc);
            },
            [&](const ex::If& n) -> ExprPtr {
                auto c = desugar(n.cond);
                auto t = desugar(n.then_branch);
                auto f = desugar(n.else_branch);
                if (c == n.cond && t == n.then_branch && f == n.else_branch) return e;
                return mk::if_(c, t, f, e->loc);
            },
            [&](const ex::Proc& n) -> ExprPtr {
                return mk::lam(n.binder, desugar(n.annot), mk::box(desugar(n.body), e->loc), e->loc);
            },
            [&](const auto&) -> ExprPtr { return e; },
        },
        e->node);
}

namespace {

CmdPtr do_expansion(ExprPtr boxed, SourceLoc loc) {
    return mk::bnd(std::move(boxed), "x", mk::ret(mk::var("x", loc), loc), loc);
}

}  // namespace

CmdPtr desugar(const CmdPtr& m) {
    return std::visit(
        overloaded{
            [&](const cm::Ret& n) -> CmdPtr {
                auto v = desugar(n.value);
                return v == n.value ? m : mk::ret(v, m->loc);
            },
            [&](const cm::Bnd& n) -> CmdPtr {
                auto b = desugar(n.boxed);
                auto r = desugar(n.rest);
                return b == n.boxed && r == n.rest ? m : mk::bnd(b, n.binder, r, m->loc);
            },
            [&](const cm::New& n) -> CmdPtr {
                auto b = desugar(n.body);
                return b == n.body ? m : mk::new_(n.binder, b, n.sym, m->loc);
            },
            [&](const cm::GateAp& n) -> CmdPtr {
                auto a = desugar(n.args);
                return a == n.args ? m : mk::gate_ap(n.gate, a, m->loc);
            },
            [&](const cm::DiagAp& n) -> CmdPtr {
                auto c = desugar(n.control);
                auto t = desugar(n.targets);
                return c == n.control && t == n.targets ? m : mk::diag_ap(n.zero, n.one, c, t, m->loc);
            },
            [&](const cm::Meas& n) -> CmdPtr {
                auto t = desugar(n.target);
                return t == n.target ? m : mk::meas(t, m->loc);
            },
            [&](const cm::Scope& n) -> CmdPtr {
                auto b = desugar(n.body);
                return b == n.body ? m : mk::scope(n.sym, b, m->loc);
            },
            [&](const cm::Block& n) -> CmdPtr {
                CmdPtr acc = desugar(n.last);
                for (auto it = n.items.rbegin(); it != n.items.rend(); ++it) {
                    acc = mk::bnd(mk::box(desugar(it->cmd), it->cmd->loc), it->binder.value_or("_"), acc,
                                  it->cmd->loc);
                }
                return acc;
            },
            [&](const cm::Do& n) -> CmdPtr { return do_expansion(mk::box(desugar(n.body), m->loc), m->loc); },
            [&](const cm::Call& n) -> CmdPtr {
                auto arg = n.arg ? desugar(n.arg) : mk::unit(m->loc);
                return do_expansion(mk::app(desugar(n.fn), arg, m->loc), m->loc);
            },
        },
        m->node);
}

Term desugar(const Term& t) {
    return std::visit([](const auto& p) -> Term { return desugar(p); }, t);
}

bool is_core(const ExprPtr& e) { return desugar(e) == e; }
bool is_core(const CmdPtr& m) { return desugar(m) == m; }

}  // namespace lqs
