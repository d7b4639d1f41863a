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

#include "lqs/core/term_ops.hpp"

#include <algorithm>

namespace lqs {

// ================================================================ free vars

namespace {

struct FreeVarCollector {
    std::vector<std::string> bound;
    std::set<std::string> out;

    bool is_bound(const std::string& n) const { return std::find(bound.begin(), bound.end(), n) != bound.end(); }

    void go(const ExprPtr& e) {
        std::visit(overloaded{
                       [&](const ex::Var& v) {
                           if (!is_bound(v.name)) out.insert(v.name);
                       },
                       [&](const ex::Let& n) {
                           go(n.bound);
                           scoped(n.binder, [&] { go(n.body); });
                       },
                       [&](const ex::Lam& n) { scoped(n.binder, [&] { go(n.body); }); },
                       [&](const ex::App& n) {
                           go(n.fn);
                           go(n.arg);
                       },
                       [&](const ex::Box& n) { go(n.cmd); },
                       [&](const ex::Tuple& n) {
                           for (const auto& i : n.items) go(i);
                       },
                       [&](const ex::Proj& n) { go(n.tuple); },
                       [&](const ex::If& n) {
                           go(n.cond);
                           go(n.then_branch);
                           go(n.else_branch);
                       },
                       [&](const ex::Proc& n) { scoped(n.binder, [&] { go(n.body); }); },
                       [&](const auto&) {},
                   },
                   e->node);
    }

    void go(const CmdPtr& m) {
        std::visit(overloaded{
                       [&](const cm::Ret& n) { go(n.value); },
                       [&](const cm::Bnd& n) {
                           go(n.boxed);
                           scoped(n.binder, [&] { go(n.rest); });
                       },
                       [&](const cm::New& n) { scoped(n.binder, [&] { go(n.body); }); },
                       [&](const cm::GateAp& n) { go(n.args); },
                       [&](const cm::DiagAp& n) {
                           go(n.control);
                           go(n.targets);
                       },
                       [&](const cm::Meas& n) { go(n.target); },
                       [&](const cm::Scope& n) { go(n.body); },
                       [&](const cm::Block& n) {
                           std::size_t pushed = 0;
                           for (const auto& item : n.items) {
                               go(item.cmd);
                               if (item.binder) {
                                   bound.push_back(*item.binder);
                                   ++pushed;
                               }
                           }
                           go(n.last);
                           bound.resize(bound.size() - pushed);
                       },
                       [&](const cm::Do& n) { go(n.body); },
                       [&](const cm::Call& n) {
                           go(n.fn);
                           if (n.arg) go(n.arg);
                       },
                   },
                   m->node);
    }

    template <class F>
    void scoped(const std::string& name, F&& f) {
        bound.push_back(name);
        f();
        bound.pop_back();
    }
};

struct SymbolCollector {
    std::vector<QubitSymbol> bound;
    SymbolSet out;

    void add(const QubitSymbol& s) {
        if (std::find(bound.begin(), bound.end(), s) == bound.end()) out.insert(s);
    }

    void go(const TypePtr& t) {
        std::visit(overloaded{
                       [&](const ty::QRef& n) { add(n.sym); },
                       [&](const ty::Arrow& n) {
                           go(n.dom);
                           go(n.cod);
                       },
                       [&](const ty::Cmd& n) { go(n.ret); },
                       [&](const ty::Prod& n) {
                           for (const auto& i : n.items) go(i);
                       },
                       [&](const ty::Proc& n) {
                           go(n.dom);
                           go(n.cod);
                       },
                       [&](const auto&) {},
                   },
                   t->node);
    }

    void go(const ExprPtr& e) {
        std::visit(overloaded{
                       [&](const ex::Let& n) {
                           go(n.bound);
                           go(n.body);
                       },
                       [&](const ex::Lam& n) {
                           go(n.annot);
                           go(n.body);
                       },
                       [&](const ex::App& n) {
                           go(n.fn);
                           go(n.arg);
                       },
                       [&](const ex::Box& n) { go(n.cmd); },
                       [&](const ex::Tuple& n) {
                           for (const auto& i : n.items) go(i);
                       },
                       [&](const ex::Proj& n) { go(n.tuple); },
                       [&](const ex::If& n) {
                           go(n.cond);
                           go(n.then_branch);
                           go(n.else_branch);
                       },
                       [&](const ex::QLoc& n) { add(n.sym); },
                       [&](const ex::Proc& n) {
                           go(n.annot);
                           go(n.body);
                       },
                       [&](const auto&) {},
                   },
                   e->node);
    }

    void go(const CmdPtr& m) {
        std::visit(overloaded{
                       [&](const cm::Ret& n) { go(n.value); },
                       [&](const cm::Bnd& n) {
                           go(n.boxed);
                           go(n.rest);
                       },
                       [&](const cm::New& n) {
                           if (n.sym) bound.push_back(*n.sym);
                           go(n.body);
                           if (n.sym) bound.pop_back();
                       },
                       [&](const cm::GateAp& n) { go(n.args); },
                       [&](const cm::DiagAp& n) {
                           go(n.control);
                           go(n.targets);
                       },
                       [&](const cm::Meas& n) { go(n.target); },
                       [&](const cm::Scope& n) {
                           bound.push_back(n.sym);
                           go(n.body);
                           bound.pop_back();
                       },
                       [&](const cm::Block& n) {
                           for (const auto& item : n.items) go(item.cmd);
                           go(n.last);
                       },
                       [&](const cm::Do& n) { go(n.body); },
                       [&](const cm::Call& n) {
                           go(n.fn);
                           if (n.arg) go(n.arg);
                       },
                   },
                   m->node);
    }
};

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
    FreeVarCollector c;
    c.go(e);
    return std::move(c.out);
}
std::set<std::string> free_vars(const CmdPtr& m) {
    FreeVarCollector c;
    c.go(m);
    return std::move(c.out);
}

SymbolSet free_qubit_symbols(const ExprPtr& e) {
    SymbolCollector c;
    c.go(e);
    return std::move(c.out);
}
SymbolSet free_qubit_symbols(const CmdPtr& m) {
    SymbolCollector c;
    c.go(m);
    return std::move(c.out);
}
SymbolSet free_qubit_symbols(const TypePtr& t) {
    SymbolCollector c;
    c.go(t);
    return std::move(c.out);
}
SymbolSet free_qubit_symbols(const Term& t) {
    return std::visit([](const auto& p) { return free_qubit_symbols(p); }, t);
}

// ================================================================ substitution

namespace {

bool occurs_free(const std::string& x, const ExprPtr& e) { return free_vars(e).count(x) != 0; }
bool occurs_free(const std::string& x, const CmdPtr& m) { return free_vars(m).count(x) != 0; }

class Substituter {
public:
    Substituter(ExprPtr value, std::string x) : value_(std::move(value)), x_(std::move(x)), fv_(free_vars(value_)) {}

    ExprPtr go(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ex::Var& v) -> ExprPtr { return v.name == x_ ? value_ : e; },
                [&](const ex::Let& n) -> ExprPtr {
                    auto bound = go(n.bound);
                    auto [binder, body] = under_binder(n.binder, n.body);
                    if (bound == n.bound && body == n.body && binder == n.binder) return e;
                    return mk::let(bound, binder, body, e->loc);
                },
                [&](const ex::Lam& n) -> ExprPtr {
                    auto [binder, body] = under_binder(n.binder, n.body);
                    if (body == n.body && binder == n.binder) return e;
                    return mk::lam(binder, n.annot, body, e->loc);
                },
                [&](const ex::App& n) -> ExprPtr {
                    auto fn = go(n.fn);
                    auto arg = go(n.arg);
                    if (fn == n.fn && arg == n.arg) return e;
                    return mk::app(fn, arg, e->loc);
                },
                [&](const ex::Box& n) -> ExprPtr {
                    auto c = go(n.cmd);
                    return c == n.cmd ? e : mk::box(c, e->loc);
                },
                [&](const ex::Tuple& n) -> ExprPtr {
                    std::vector<ExprPtr> items;
                    items.reserve(n.items.size());
                    bool changed = false;
                    for (const auto& i : n.items) {
                        items.push_back(go(i));
                        changed |= items.back() != i;
                    }
                    return changed ? mk::tuple(std::move(items), e->loc) : e;
                },
                [&](const ex::Proj& n) -> ExprPtr {
                    auto t = go(n.tuple);
                    return t == n.tuple ? e : mk::proj(n.index, t, e->loc);
                },
                [&](const ex::If& n) -> ExprPtr {
                    auto c = go(n.cond);
                    auto t = go(n.then_branch);
                    auto f = go(n.else_branch);
                    if (c == n.cond && t == n.then_branch && f == n.else_branch) return e;
                    return mk::if_(c, t, f, e->loc);
                },
                [&](const ex::Proc& n) -> ExprPtr {
                    auto [binder, body] = under_binder(n.binder, n.body);
                    if (body == n.body && binder == n.binder) return e;
                    return mk::proc(binder, n.annot, body, e->loc);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    CmdPtr go(const CmdPtr& m) {
        return std::visit(
            overloaded{
                [&](const cm::Ret& n) -> CmdPtr {
                    auto v = go(n.value);
                    return v == n.value ? m : mk::ret(v, m->loc);
                },
                [&](const cm::Bnd& n) -> CmdPtr {
                    auto boxed = go(n.boxed);
                    auto [binder, rest] = under_binder(n.binder, n.rest);
                    if (boxed == n.boxed && rest == n.rest && binder == n.binder) return m;
                    return mk::bnd(boxed, binder, rest, m->loc);
                },
                [&](const cm::New& n) -> CmdPtr {
                    auto [binder, body] = under_binder(n.binder, n.body);
                    if (body == n.body && binder == n.binder) return m;
                    return mk::new_(binder, body, n.sym, m->loc);
                },
                [&](const cm::GateAp& n) -> CmdPtr {
                    auto a = go(n.args);
                    return a == n.args ? m : mk::gate_ap(n.gate, a, m->loc);
                },
                [&](const cm::DiagAp& n) -> CmdPtr {
                    auto c = go(n.control);
                    auto t = go(n.targets);
                    if (c == n.control && t == n.targets) return m;
                    return mk::diag_ap(n.zero, n.one, c, t, m->loc);
                },
                [&](const cm::Meas& n) -> CmdPtr {
                    auto t = go(n.target);
                    return t == n.target ? m : mk::meas(t, m->loc);
                },
                [&](const cm::Scope& n) -> CmdPtr {
                    auto b = go(n.body);
                    return b == n.body ? m : mk::scope(n.sym, b, m->loc);
                },
                [&](const cm::Block& n) -> CmdPtr { return go_block(m, n); },
                [&](const cm::Do& n) -> CmdPtr {
                    auto b = go(n.body);
                    return b == n.body ? m : mk::do_(b, m->loc);
                },
                [&](const cm::Call& n) -> CmdPtr {
                    auto fn = go(n.fn);
                    auto arg = n.arg ? go(n.arg) : nullptr;
                    if (fn == n.fn && arg == n.arg) return m;
                    return mk::call(fn, arg, m->loc);
                },
            },
            m->node);
    }

private:
    template <class Body>
    std::pair<std::string, Body> under_binder(const std::string& binder, const Body& body) {
        if (binder == x_) return {binder, body};
        if (fv_.count(binder) && occurs_free(x_, body)) {
            std::string renamed = fresh_var_name(binder);
            Substituter rename(mk::var(renamed), binder);
            return {renamed, go(rename.go(body))};
        }
        return {binder, go(body)};
    }

    CmdPtr go_block(const CmdPtr& m, const cm::Block& n) {
        std::vector<cm::BlockItem> items;
        items.reserve(n.items.size());
        bool changed = false;
        for (std::size_t i = 0; i < n.items.size(); ++i) {
            const auto& item = n.items[i];
            auto c = go(item.cmd);
            changed |= c != item.cmd;
            items.push_back({item.binder, c});
            if (!item.binder) continue;
            const std::string& y = *item.binder;
            if (y == x_) {
                items.insert(items.end(), n.items.begin() + static_cast<std::ptrdiff_t>(i + 1), n.items.end());
                return changed ? mk::block(std::move(items), n.last, m->loc) : m;
            }
            // The binder scopes over the remainder; rename it there if it would
            // capture a free variable of the substituted value.
            std::vector<cm::BlockItem> tail_items(n.items.begin() + static_cast<std::ptrdiff_t>(i + 1), n.items.end());
            auto tail = mk::block(tail_items, n.last, m->loc);
            if (fv_.count(y) && occurs_free(x_, tail)) {
                std::string renamed = fresh_var_name(y);
                Substituter rename(mk::var(renamed), y);
                auto renamed_tail = go(rename.go(tail));
                items.back().binder = renamed;
                const auto& rb = std::get<cm::Block>(renamed_tail->node);
                items.insert(items.end(), rb.items.begin(), rb.items.end());
                return mk::block(std::move(items), rb.last, m->loc);
            }
        }
        auto last = go(n.last);
        changed |= last != n.last;
        return changed ? mk::block(std::move(items), last, m->loc) : m;
    }

    ExprPtr value_;
    std::string x_;
    std::set<std::string> fv_;
};

}  // namespace

ExprPtr subst(const ExprPtr& value, std::string_view x, const ExprPtr& into) {
    if (!occurs_free(std::string(x), into)) return into;
    return Substituter(value, std::string(x)).go(into);
}
CmdPtr subst(const ExprPtr& value, std::string_view x, const CmdPtr& into) {
    if (!occurs_free(std::string(x), into)) return into;
    return Substituter(value, std::string(x)).go(into);
}
Term subst(const ExprPtr& value, std::string_view x, const Term& into) {
    return std::visit([&](const auto& p) -> Term { return subst(value, x, p); }, into);
}

// ================================================================ symbol renaming

namespace {

struct SymbolRenamer {
    QubitSymbol from, to;

    TypePtr go(const TypePtr& t) {
        return std::visit(overloaded{
                              [&](const ty::QRef& n) -> TypePtr { return n.sym == from ? mk::qref(to) : t; },
                              [&](const ty::Arrow& n) -> TypePtr {
                                  auto d = go(n.dom);
                                  auto c = go(n.cod);
                                  return d == n.dom && c == n.cod ? t : mk::arrow(d, c);
                              },
                              [&](const ty::Cmd& n) -> TypePtr {
                                  auto r = go(n.ret);
                                  return r == n.ret ? t : mk::cmd_t(r);
                              },
                              [&](const ty::Prod& n) -> TypePtr {
                                  std::vector<TypePtr> items;
                                  bool changed = false;
                                  for (const auto& i : n.items) {
                                      items.push_back(go(i));
                                      changed |= items.back() != i;
                                  }
                                  return changed ? mk::prod(std::move(items)) : t;
                              },
                              [&](const ty::Proc& n) -> TypePtr {
                                  auto d = go(n.dom);
                                  auto c = go(n.cod);
                                  return d == n.dom && c == n.cod ? t : mk::proc_t(d, c);
                              },
                              [&](const auto&) -> TypePtr { return t; },
                          },
                          t->node);
    }

    ExprPtr go(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ex::Let& n) -> ExprPtr {
                    auto b = go(n.bound);
                    auto body = go(n.body);
                    return b == n.bound && body == n.body ? e : mk::let(b, n.binder, body, e->loc);
                },
                [&](const ex::Lam& n) -> ExprPtr {
                    auto a = go(n.annot);
                    auto body = go(n.body);
                    return a == n.annot && body == n.body ? e : mk::lam(n.binder, a, body, e->loc);
                },
                [&](const ex::App& n) -> ExprPtr {
                    auto f = go(n.fn);
                    auto a = go(n.arg);
                    return f == n.fn && a == n.arg ? e : mk::app(f, a, e->loc);
                },
                [&](const ex::Box& n) -> ExprPtr {
                    auto c = go(n.cmd);
                    return c == n.cmd ? e : mk::box(c, e->loc);
                },
                [&](const ex::Tuple& n) -> ExprPtr {
                    std::vector<ExprPtr> items;
                    bool changed = false;
                    for (const auto& i : n.items) {
                        items.push_back(go(i));
                        changed |= items.back() != i;
                    }
                    return changed ? mk::tuple(std::move(items), e->loc) : e;
                },
                [&](const ex::Proj& n) -> ExprPtr {
                    auto t = go(n.tuple);
                    return t == n.tuple ? e : mk::proj(n.index, t, e->loc);
                },
                [&](const ex::If& n) -> ExprPtr {
                    auto c = go(n.cond);
                    auto t = go(n.then_branch);
                    auto f = go(n.else_branch);
                    if (c == n.cond && t == n.then_branch && f == n.else_branch) return e;
                    return mk::if_(c, t, f, e->loc);
                },
                [&](const ex::QLoc& n) -> ExprPtr { return n.sym == from ? mk::qloc(to, e->loc) : e; },
                [&](const ex::Proc& n) -> ExprPtr {
                    auto a = go(n.annot);
                    auto body = go(n.body);
                    return a == n.annot && body == n.body ? e : mk::proc(n.binder, a, body, e->loc);
                },
                [&](const auto&) -> ExprPtr { return e; },
            },
            e->node);
    }

    CmdPtr go(const CmdPtr& m) {
        return std::visit(
            overloaded{
                [&](const cm::Ret& n) -> CmdPtr {
                    auto v = go(n.value);
                    return v == n.value ? m : mk::ret(v, m->loc);
                },
                [&](const cm::Bnd& n) -> CmdPtr {
                    auto b = go(n.boxed);
                    auto r = go(n.rest);
                    return b == n.boxed && r == n.rest ? m : mk::bnd(b, n.binder, r, m->loc);
                },
                [&](const cm::New& n) -> CmdPtr {
                    if (n.sym && *n.sym == from) return m;
                    auto b = go(n.body);
                    return b == n.body ? m : mk::new_(n.binder, b, n.sym, m->loc);
                },
                [&](const cm::GateAp& n) -> CmdPtr {
                    auto a = go(n.args);
                    return a == n.args ? m : mk::gate_ap(n.gate, a, m->loc);
                },
                [&](const cm::DiagAp& n) -> CmdPtr {
                    auto c = go(n.control);
                    auto t = go(n.targets);
                    return c == n.control && t == n.targets ? m : mk::diag_ap(n.zero, n.one, c, t, m->loc);
                },
                [&](const cm::Meas& n) -> CmdPtr {
                    auto t = go(n.target);
                    return t == n.target ? m : mk::meas(t, m->loc);
                },
                [&](const cm::Scope& n) -> CmdPtr {
                    if (n.sym == from) return m;
                    auto b = go(n.body);
                    return b == n.body ? m : mk::scope(n.sym, b, m->loc);
                },
                [&](const cm::Block& n) -> CmdPtr {
                    std::vector<cm::BlockItem> items;
                    bool changed = false;
                    for (const auto& i : n.items) {
                        items.push_back({i.binder, go(i.cmd)});
                        changed |= items.back().cmd != i.cmd;
                    }
                    auto last = go(n.last);
                    changed |= last != n.last;
                    return changed ? mk::block(std::move(items), last, m->loc) : m;
                },
                [&](const cm::Do& n) -> CmdPtr {
                    auto b = go(n.body);
                    return b == n.body ? m : mk::do_(b, m->loc);
                },
                [&](const cm::Call& n) -> CmdPtr {
                    auto f = go(n.fn);
                    auto a = n.arg ? go(n.arg) : nullptr;
                    return f == n.fn && a == n.arg ? m : mk::call(f, a, m->loc);
                },
            },
            m->node);
    }
};

}  // namespace

ExprPtr rename_symbol(const ExprPtr& e, const QubitSymbol& from, const QubitSymbol& to) {
    return SymbolRenamer{from, to}.go(e);
}
CmdPtr rename_symbol(const CmdPtr& m, const QubitSymbol& from, const QubitSymbol& to) {
    return SymbolRenamer{from, to}.go(m);
}
TypePtr rename_symbol(const TypePtr& t, const QubitSymbol& from, const QubitSymbol& to) {
    return SymbolRenamer{from, to}.go(t);
}

// ================================================================ equality

bool gate_equal(const GatePtr& a, const GatePtr& b) {
    if (a == b) return true;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(overloaded{
                          [&](const gate::Named& x) {
                              const auto& y = std::get<gate::Named>(b->node);
                              return x.name == y.name && x.dim == y.dim;
                          },
                          [&](const gate::Adjoint& x) {
                              return gate_equal(x.inner, std::get<gate::Adjoint>(b->node).inner);
                          },
                          [&](const gate::Product& x) {
                              const auto& y = std::get<gate::Product>(b->node);
                              return gate_equal(x.outer, y.outer) && gate_equal(x.inner, y.inner);
                          },
                          [&](const gate::Tensor& x) {
                              const auto& y = std::get<gate::Tensor>(b->node);
                              return gate_equal(x.high, y.high) && gate_equal(x.low, y.low);
                          },
                          [&](const gate::Diag& x) {
                              const auto& y = std::get<gate::Diag>(b->node);
                              return gate_equal(x.zero, y.zero) && gate_equal(x.one, y.one);
                          },
                      },
                      a->node);
}

namespace {

// A block item without a binder binds a name no variable can refer to.
const std::string kNoBinder;

class AlphaComparator {
public:
    explicit AlphaComparator(bool strict) : strict_(strict) {}

    bool eq(const TypePtr& a, const TypePtr& b) {
        if (a->node.index() != b->node.index()) return false;
        return std::visit(overloaded{
                              [&](const ty::QRef& x) { return sym_eq(x.sym, std::get<ty::QRef>(b->node).sym); },
                              [&](const ty::Arrow& x) {
                                  const auto& y = std::get<ty::Arrow>(b->node);
                                  return eq(x.dom, y.dom) && eq(x.cod, y.cod);
                              },
                              [&](const ty::Cmd& x) { return eq(x.ret, std::get<ty::Cmd>(b->node).ret); },
                              [&](const ty::Prod& x) {
                                  const auto& y = std::get<ty::Prod>(b->node);
                                  if (x.items.size() != y.items.size()) return false;
                                  for (std::size_t i = 0; i < x.items.size(); ++i)
                                      if (!eq(x.items[i], y.items[i])) return false;
                                  return true;
                              },
                              [&](const ty::Proc& x) {
                                  const auto& y = std::get<ty::Proc>(b->node);
                                  return eq(x.dom, y.dom) && eq(x.cod, y.cod);
                              },
                              [&](const auto&) { return true; },
                          },
                          a->node);
    }

    bool eq(const ExprPtr& a, const ExprPtr& b) {
        if (a->node.index() != b->node.index()) return false;
        return std::visit(
            overloaded{
                [&](const ex::Var& x) { return var_eq(x.name, std::get<ex::Var>(b->node).name); },
                [&](const ex::Let& x) {
                    const auto& y = std::get<ex::Let>(b->node);
                    return eq(x.bound, y.bound) && bind(x.binder, y.binder, [&] { return eq(x.body, y.body); });
                },
                [&](const ex::Lam& x) {
                    const auto& y = std::get<ex::Lam>(b->node);
                    return eq(x.annot, y.annot) && bind(x.binder, y.binder, [&] { return eq(x.body, y.body); });
                },
                [&](const ex::App& x) {
                    const auto& y = std::get<ex::App>(b->node);
                    return eq(x.fn, y.fn) && eq(x.arg, y.arg);
                },
                [&](const ex::Box& x) { return eq(x.cmd, std::get<ex::Box>(b->node).cmd); },
                [&](const ex::Tuple& x) {
                    const auto& y = std::get<ex::Tuple>(b->node);
                    if (x.items.size() != y.items.size()) return false;
                    for (std::size_t i = 0; i < x.items.size(); ++i)
                        if (!eq(x.items[i], y.items[i])) return false;
                    return true;
                },
                [&](const ex::Proj& x) {
                    const auto& y = std::get<ex::Proj>(b->node);
                    return x.index == y.index && eq(x.tuple, y.tuple);
                },
                [&](const ex::Bool& x) { return x.value == std::get<ex::Bool>(b->node).value; },
                [&](const ex::If& x) {
                    const auto& y = std::get<ex::If>(b->node);
                    return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) && eq(x.else_branch, y.else_branch);
                },
                [&](const ex::Unit&) { return true; },
                [&](const ex::QLoc& x) { return sym_eq(x.sym, std::get<ex::QLoc>(b->node).sym); },
                [&](const ex::GateConst& x) { return gate_equal(x.gate, std::get<ex::GateConst>(b->node).gate); },
                [&](const ex::Proc& x) {
                    const auto& y = std::get<ex::Proc>(b->node);
                    return eq(x.annot, y.annot) && bind(x.binder, y.binder, [&] { return eq(x.body, y.body); });
                },
            },
            a->node);
    }

    bool eq(const CmdPtr& a, const CmdPtr& b) {
        if (a->node.index() != b->node.index()) return false;
        return std::visit(
            overloaded{
                [&](const cm::Ret& x) { return eq(x.value, std::get<cm::Ret>(b->node).value); },
                [&](const cm::Bnd& x) {
                    const auto& y = std::get<cm::Bnd>(b->node);
                    return eq(x.boxed, y.boxed) && bind(x.binder, y.binder, [&] { return eq(x.rest, y.rest); });
                },
                [&](const cm::New& x) {
                    const auto& y = std::get<cm::New>(b->node);
                    if (strict_ && x.sym.has_value() != y.sym.has_value()) return false;
                    QubitSymbol none;
                    return bind_sym(x.sym.value_or(none), y.sym.value_or(none), [&] {
                        return bind(x.binder, y.binder, [&] { return eq(x.body, y.body); });
                    });
                },
                [&](const cm::GateAp& x) {
                    const auto& y = std::get<cm::GateAp>(b->node);
                    return gate_equal(x.gate, y.gate) && eq(x.args, y.args);
                },
                [&](const cm::DiagAp& x) {
                    const auto& y = std::get<cm::DiagAp>(b->node);
                    return gate_equal(x.zero, y.zero) && gate_equal(x.one, y.one) && eq(x.control, y.control) &&
                           eq(x.targets, y.targets);
                },
                [&](const cm::Meas& x) { return eq(x.target, std::get<cm::Meas>(b->node).target); },
                [&](const cm::Scope& x) {
                    const auto& y = std::get<cm::Scope>(b->node);
                    return bind_sym(x.sym, y.sym, [&] { return eq(x.body, y.body); });
                },
                [&](const cm::Block& x) {
                    const auto& y = std::get<cm::Block>(b->node);
                    if (x.items.size() != y.items.size()) return false;
                    return block_eq(x, y, 0);
                },
                [&](const cm::Do& x) { return eq(x.body, std::get<cm::Do>(b->node).body); },
                [&](const cm::Call& x) {
                    const auto& y = std::get<cm::Call>(b->node);
                    if (!eq(x.fn, y.fn)) return false;
                    if (!x.arg || !y.arg) return !x.arg && !y.arg;
                    return eq(x.arg, y.arg);
                },
            },
            a->node);
    }

private:
    bool block_eq(const cm::Block& x, const cm::Block& y, std::size_t i) {
        if (i == x.items.size()) return eq(x.last, y.last);
        if (!eq(x.items[i].cmd, y.items[i].cmd)) return false;
        const auto& bx = x.items[i].binder;
        const auto& by = y.items[i].binder;
        if (strict_ && bx.has_value() != by.has_value()) return false;
        return bind(bx.value_or(kNoBinder), by.value_or(kNoBinder), [&] { return block_eq(x, y, i + 1); });
    }

    bool var_eq(const std::string& a, const std::string& b) const {
        for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
            if (it->first == a || it->second == b) return it->first == a && it->second == b;
        }
        return a == b;
    }

    bool sym_eq(const QubitSymbol& a, const QubitSymbol& b) const {
        for (auto it = syms_.rbegin(); it != syms_.rend(); ++it) {
            if (it->first == a || it->second == b) return it->first == a && it->second == b;
        }
        return a == b;
    }

    template <class F>
    bool bind(const std::string& a, const std::string& b, F&& f) {
        if (strict_ && a != b) return false;
        vars_.emplace_back(a, b);
        bool r = f();
        vars_.pop_back();
        return r;
    }

    template <class F>
    bool bind_sym(const QubitSymbol& a, const QubitSymbol& b, F&& f) {
        if (strict_ && a != b) return false;
        syms_.emplace_back(a, b);
        bool r = f();
        syms_.pop_back();
        return r;
    }

    bool strict_;
    std::vector<std::pair<std::string, std::string>> vars_;
    std::vector<std::pair<QubitSymbol, QubitSymbol>> syms_;
};

}  // namespace

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) { return AlphaComparator(false).eq(a, b); }
bool alpha_eq(const CmdPtr& a, const CmdPtr& b) { return AlphaComparator(false).eq(a, b); }
bool alpha_eq(const TypePtr& a, const TypePtr& b) { return AlphaComparator(false).eq(a, b); }
bool alpha_eq(const Term& a, const Term& b) {
    if (a.index() != b.index()) return false;
    if (a.index() == 0) return alpha_eq(std::get<0>(a), std::get<0>(b));
    return alpha_eq(std::get<1>(a), std::get<1>(b));
}

bool alpha_eq_modulo_symbols(const Term& a, const Term& b) {
    if (a.index() != b.index()) return false;
    auto fa = free_qubit_symbols(a);
    auto fb = free_qubit_symbols(b);
    if (fa.size() != fb.size()) return false;
    std::vector<QubitSymbol> from(fa.begin(), fa.end());
    std::vector<QubitSymbol> to(fb.begin(), fb.end());
    std::vector<QubitSymbol> tmp;
    Term staged = a;
    auto rename = [](const Term& t, const QubitSymbol& x, const QubitSymbol& y) -> Term {
        if (t.index() == 0) return rename_symbol(std::get<0>(t), x, y);
        return rename_symbol(std::get<1>(t), x, y);
    };
    for (const auto& s : from) {
        tmp.push_back(QubitSymbol::fresh(s.name()));
        staged = rename(staged, s, tmp.back());
    }
    std::vector<std::size_t> perm(to.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
        Term candidate = staged;
        for (std::size_t i = 0; i < tmp.size(); ++i) candidate = rename(candidate, tmp[i], to[perm[i]]);
        if (alpha_eq(candidate, b)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) { return AlphaComparator(true).eq(a, b); }
bool structurally_equal(const CmdPtr& a, const CmdPtr& b) { return AlphaComparator(true).eq(a, b); }
bool structurally_equal(const Term& a, const Term& b) {
    if (a.index() != b.index()) return false;
    if (a.index() == 0) return structurally_equal(std::get<0>(a), std::get<0>(b));
    return structurally_equal(std::get<1>(a), std::get<1>(b));
}

// ================================================================ misc

bool is_value(const ExprPtr& e) {
    return std::visit(overloaded{
                          [](const ex::Lam&) { return true; },
                          [](const ex::Proc&) { return true; },
                          [](const ex::Box&) { return true; },
                          [](const ex::QLoc&) { return true; },
                          [](const ex::Bool&) { return true; },
                          [](const ex::Unit&) { return true; },
                          [](const ex::GateConst&) { return true; },
                          [](const ex::Tuple& t) {
                              return std::all_of(t.items.begin(), t.items.end(), [](const auto& i) { return is_value(i); });
                          },
                          [](const auto&) { return false; },
                      },
                      e->node);
}

std::size_t term_size(const ExprPtr& e) {
    return 1 + std::visit(overloaded{
                              [](const ex::Let& n) { return term_size(n.bound) + term_size(n.body); },
                              [](const ex::Lam& n) { return term_size(n.body); },
                              [](const ex::App& n) { return term_size(n.fn) + term_size(n.arg); },
                              [](const ex::Box& n) { return term_size(n.cmd); },
                              [](const ex::Tuple& n) {
                                  std::size_t s = 0;
                                  for (const auto& i : n.items) s += term_size(i);
                                  return s;
                              },
                              [](const ex::Proj& n) { return term_size(n.tuple); },
                              [](const ex::If& n) {
                                  return term_size(n.cond) + term_size(n.then_branch) + term_size(n.else_branch);
                              },
                              [](const ex::Proc& n) { return term_size(n.body); },
                              [](const auto&) { return std::size_t{0}; },
                          },
                          e->node);
}

std::size_t term_size(const CmdPtr& m) {
    return 1 + std::visit(overloaded{
                              [](const cm::Ret& n) { return term_size(n.value); },
                              [](const cm::Bnd& n) { return term_size(n.boxed) + term_size(n.rest); },
                              [](const cm::New& n) { return term_size(n.body); },
                              [](const cm::GateAp& n) { return term_size(n.args); },
                              [](const cm::DiagAp& n) { return term_size(n.control) + term_size(n.targets); },
                              [](const cm::Meas& n) { return term_size(n.target); },
                              [](const cm::Scope& n) { return term_size(n.body); },
                              [](const cm::Block& n) {
                                  std::size_t s = term_size(n.last);
                                  for (const auto& i : n.items) s += term_size(i.cmd);
                                  return s;
                              },
                              [](const cm::Do& n) { return term_size(n.body); },
                              [](const cm::Call& n) { return term_size(n.fn) + (n.arg ? term_size(n.arg) : 0); },
                          },
                          m->node);
}

}  // namespace lqs
