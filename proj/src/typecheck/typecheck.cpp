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

#include "lqs/typecheck/typecheck.hpp"

#include <algorithm>

#include "lqs/core/desugar.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/gates/gateset.hpp"

namespace lqs {

const char* type_error_kind_name(TypeErrorKind k) {
    switch (k) {
        case TypeErrorKind::UnboundVar: return "UnboundVar";
        case TypeErrorKind::Mismatch: return "Mismatch";
        case TypeErrorKind::NotAFunction: return "NotAFunction";
        case TypeErrorKind::NotATuple: return "NotATuple";
        case TypeErrorKind::BadArity: return "BadArity";
        case TypeErrorKind::AliasedQubits: return "AliasedQubits";
        case TypeErrorKind::EscapingQubit: return "EscapingQubit";
        case TypeErrorKind::UnknownSymbol: return "UnknownSymbol";
        case TypeErrorKind::DimensionMismatch: return "DimensionMismatch";
    }
    return "TypeError";
}

// ---------------------------------------------------------------- environments

Signature::Signature(std::vector<QubitSymbol> syms) {
    for (auto& s : syms)
        if (!contains(s)) syms_.push_back(std::move(s));
}

bool Signature::contains(const QubitSymbol& q) const { return std::find(syms_.begin(), syms_.end(), q) != syms_.end(); }

Signature Signature::extended(const QubitSymbol& q) const {
    if (contains(q)) throw std::logic_error("signature already contains " + q.name());
    Signature s = *this;
    s.syms_.push_back(q);
    return s;
}

Signature Signature::without(const QubitSymbol& q) const {
    Signature s;
    for (const auto& x : syms_)
        if (x != q) s.syms_.push_back(x);
    return s;
}

TypingContext TypingContext::extended(std::string name, TypePtr t) const {
    TypingContext c = *this;
    c.bindings_.emplace_back(std::move(name), std::move(t));
    return c;
}

TypePtr TypingContext::lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
        if (it->first == name) return it->second;
    return nullptr;
}

// ---------------------------------------------------------------- type utilities

TypePtr strip_singletons(const TypePtr& t) {
    TypePtr cur = t;
    while (const auto* p = as<ty::Prod>(cur)) {
        if (p->items.empty()) return mk::unit_t();
        if (p->items.size() != 1) break;
        cur = p->items[0];
    }
    return cur;
}

bool types_equivalent(const TypePtr& a0, const TypePtr& b0) {
    TypePtr a = strip_singletons(desugar(a0));
    TypePtr b = strip_singletons(desugar(b0));
    if (a->node.index() != b->node.index()) return false;
    return std::visit(overloaded{
                          [&](const ty::QRef& x) { return x.sym == std::get<ty::QRef>(b->node).sym; },
                          [&](const ty::Arrow& x) {
                              const auto& y = std::get<ty::Arrow>(b->node);
                              return types_equivalent(x.dom, y.dom) && types_equivalent(x.cod, y.cod);
                          },
                          [&](const ty::Cmd& x) { return types_equivalent(x.ret, std::get<ty::Cmd>(b->node).ret); },
                          [&](const ty::Prod& x) {
                              const auto& y = std::get<ty::Prod>(b->node);
                              if (x.items.size() != y.items.size()) return false;
                              for (std::size_t i = 0; i < x.items.size(); ++i)
                                  if (!types_equivalent(x.items[i], y.items[i])) return false;
                              return true;
                          },
                          [&](const auto&) { return true; },
                      },
                      a->node);
}

bool type_wf(const Signature& sigma, const TypePtr& t) {
    for (const auto& q : free_qubit_symbols(t))
        if (!sigma.contains(q)) return false;
    return true;
}

bool is_higher_order(const TypePtr& t) {
    return std::visit(overloaded{
                          [](const ty::Arrow&) { return true; },
                          [](const ty::Proc&) { return true; },
                          [](const ty::Cmd&) { return true; },
                          [](const ty::Prod& p) {
                              return std::any_of(p.items.begin(), p.items.end(),
                                                 [](const TypePtr& i) { return is_higher_order(i); });
                          },
                          [](const auto&) { return false; },
                      },
                      t->node);
}

void check_distinct_refs(const std::vector<TypePtr>& refs, SourceLoc loc) {
    std::vector<QubitSymbol> seen;
    for (const auto& r : refs) {
        const auto* q = as<ty::QRef>(strip_singletons(r));
        if (!q) throw TypeError(TypeErrorKind::Mismatch, loc, "expected a qubit reference, found " + print(r));
        if (std::find(seen.begin(), seen.end(), q->sym) != seen.end())
            throw TypeError(TypeErrorKind::AliasedQubits, loc,
                            "qubit " + q->sym.name() + " is passed more than once to the same gate");
        seen.push_back(q->sym);
    }
}

// ---------------------------------------------------------------- inference

namespace {

std::string show(const TypePtr& t) { return print(t); }

class Checker {
public:
    std::vector<GateSite>* sites = nullptr;

    TypePtr expr(const TypingContext& g, const Signature& s, const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const ex::Var& n) -> TypePtr {
                    auto t = g.lookup(n.name);
                    if (!t) throw TypeError(TypeErrorKind::UnboundVar, e->loc, "unbound variable " + n.name);
                    return t;
                },
                [&](const ex::Let& n) -> TypePtr {
                    auto t1 = expr(g, s, n.bound);
                    return expr(g.extended(n.binder, t1), s, n.body);
                },
                [&](const ex::Lam& n) -> TypePtr {
                    auto dom = annotation(s, n.annot, e->loc);
                    auto cod = expr(g.extended(n.binder, dom), s, n.body);
                    return mk::arrow(dom, cod);
                },
                [&](const ex::App& n) -> TypePtr {
                    if (const auto* gc = as<ex::GateConst>(n.fn)) {
                        auto at = expr(g, s, n.arg);
                        gate_args(gc->gate, at, n.arg->loc);
                        return mk::cmd_t(mk::unit_t());
                    }
                    auto ft = strip_singletons(expr(g, s, n.fn));
                    const auto* arrow = as<ty::Arrow>(ft);
                    if (!arrow)
                        throw TypeError(TypeErrorKind::NotAFunction, n.fn->loc,
                                        "applied expression has type " + show(ft));
                    auto at = expr(g, s, n.arg);
                    if (!types_equivalent(arrow->dom, at))
                        throw TypeError(TypeErrorKind::Mismatch, n.arg->loc,
                                        "argument has type " + show(at) + " but " + show(arrow->dom) + " was expected");
                    return arrow->cod;
                },
                [&](const ex::Box& n) -> TypePtr { return mk::cmd_t(cmd(g, s, n.cmd)); },
                [&](const ex::Tuple& n) -> TypePtr {
                    std::vector<TypePtr> items;
                    items.reserve(n.items.size());
                    for (const auto& i : n.items) items.push_back(expr(g, s, i));
                    return mk::prod(std::move(items));
                },
                [&](const ex::Proj& n) -> TypePtr {
                    auto t = expr(g, s, n.tuple);
                    TypePtr cur = t;
                    // A singleton product is transparent both ways.
                    while (const auto* p = as<ty::Prod>(cur)) {
                        if (p->items.size() == 1 && n.index != 1) {
                            cur = p->items[0];
                            continue;
                        }
                        if (n.index > p->items.size())
                            throw TypeError(TypeErrorKind::BadArity, e->loc,
                                            "projection " + std::to_string(n.index) + " out of range for " + show(t));
                        return p->items[n.index - 1];
                    }
                    if (n.index == 1) return cur;
                    throw TypeError(TypeErrorKind::NotATuple, e->loc, "projection from non-tuple type " + show(t));
                },
                [&](const ex::Bool&) -> TypePtr { return mk::bool_t(); },
                [&](const ex::If& n) -> TypePtr {
                    auto c = strip_singletons(expr(g, s, n.cond));
                    if (!as<ty::Bool>(c))
                        throw TypeError(TypeErrorKind::Mismatch, n.cond->loc, "condition has type " + show(c));
                    auto a = expr(g, s, n.then_branch);
                    auto b = expr(g, s, n.else_branch);
                    if (!types_equivalent(a, b))
                        throw TypeError(TypeErrorKind::Mismatch, e->loc,
                                        "branches have types " + show(a) + " and " + show(b));
                    return a;
                },
                [&](const ex::Unit&) -> TypePtr { return mk::unit_t(); },
                [&](const ex::QLoc& n) -> TypePtr {
                    if (!s.contains(n.sym))
                        throw TypeError(TypeErrorKind::UnknownSymbol, e->loc,
                                        "qubit symbol " + n.sym.name() + " is not active");
                    return mk::qref(n.sym);
                },
                [&](const ex::GateConst&) -> TypePtr {
                    throw TypeError(TypeErrorKind::Mismatch, e->loc, "a gate constant must be applied to its arguments");
                },
                [&](const ex::Proc&) -> TypePtr { return expr(g, s, desugar(e)); },
            },
            e->node);
    }

    TypePtr cmd(const TypingContext& g, const Signature& s, const CmdPtr& m) {
        return std::visit(
            overloaded{
                [&](const cm::Ret& n) -> TypePtr { return expr(g, s, n.value); },
                [&](const cm::Bnd& n) -> TypePtr {
                    auto t = strip_singletons(expr(g, s, n.boxed));
                    const auto* c = as<ty::Cmd>(t);
                    if (!c)
                        throw TypeError(TypeErrorKind::Mismatch, n.boxed->loc,
                                        "bnd expects a command, found " + show(t));
                    return cmd(g.extended(n.binder, c->ret), s, n.rest);
                },
                [&](const cm::New& n) -> TypePtr {
                    QubitSymbol q = n.sym && !s.contains(*n.sym) ? *n.sym : QubitSymbol::fresh(n.binder);
                    CmdPtr body = n.sym && *n.sym != q ? rename_symbol(n.body, *n.sym, q) : n.body;
                    auto t = cmd(g.extended(n.binder, mk::qref(q)), s.extended(q), body);
                    check_escape(q, n.binder, body, t, m->loc);
                    return t;
                },
                [&](const cm::Scope& n) -> TypePtr {
                    Signature inner = s.contains(n.sym) ? s : s.extended(n.sym);
                    auto t = cmd(g, inner, n.body);
                    check_escape(n.sym, "", n.body, t, m->loc);
                    return t;
                },
                [&](const cm::GateAp& n) -> TypePtr {
                    auto at = expr(g, s, n.args);
                    gate_args(n.gate, at, m->loc);
                    return mk::unit_t();
                },
                [&](const cm::DiagAp& n) -> TypePtr {
                    auto ct = expr(g, s, n.control);
                    auto tt = expr(g, s, n.targets);
                    std::size_t du = dim_of(n.zero, m->loc);
                    std::size_t dv = dim_of(n.one, m->loc);
                    if (du != dv)
                        throw TypeError(TypeErrorKind::DimensionMismatch, m->loc,
                                        "block diagonal of dimensions " + std::to_string(du) + " and " +
                                            std::to_string(dv));
                    auto control = refs_of(ct, n.control->loc);
                    if (control.size() != 1)
                        throw TypeError(TypeErrorKind::DimensionMismatch, n.control->loc,
                                        "a controlled gate takes exactly one control qubit");
                    auto targets = refs_of(tt, n.targets->loc);
                    if ((std::size_t{1} << targets.size()) != du)
                        throw TypeError(TypeErrorKind::DimensionMismatch, m->loc,
                                        "gate of dimension " + std::to_string(du) + " applied to " +
                                            std::to_string(targets.size()) + " target qubits");
                    std::vector<TypePtr> all{control[0]};
                    all.insert(all.end(), targets.begin(), targets.end());
                    record(all, m->loc);
                    check_distinct_refs(all, m->loc);
                    return mk::unit_t();
                },
                [&](const cm::Meas& n) -> TypePtr {
                    auto t = expr(g, s, n.target);
                    auto refs = refs_of(t, n.target->loc);
                    if (refs.size() != 1)
                        throw TypeError(TypeErrorKind::Mismatch, n.target->loc,
                                        "meas expects one qubit reference, found " + show(t));
                    return mk::bool_t();
                },
                [&](const auto&) -> TypePtr { return cmd(g, s, desugar(m)); },
            },
            m->node);
    }

private:
    TypePtr annotation(const Signature& s, const TypePtr& t, SourceLoc loc) {
        TypePtr d = desugar(t);
        for (const auto& q : free_qubit_symbols(d))
            if (!s.contains(q))
                throw TypeError(TypeErrorKind::UnknownSymbol, loc, "qubit symbol " + q.name() + " is not in scope");
        return d;
    }

    static std::size_t dim_of(const GatePtr& g, SourceLoc loc) {
        try {
            return gate_dim(g);
        } catch (const GateError& e) {
            throw TypeError(TypeErrorKind::DimensionMismatch, loc, e.what());
        }
    }

    // The reference components of a gate argument: qref[q] or a product of them.
    static std::vector<TypePtr> refs_of(const TypePtr& t, SourceLoc loc) {
        TypePtr st = strip_singletons(t);
        if (as<ty::QRef>(st)) return {st};
        if (as<ty::Unit>(st)) return {};
        const auto* p = as<ty::Prod>(st);
        if (!p) throw TypeError(TypeErrorKind::Mismatch, loc, "expected qubit references, found " + show(t));
        std::vector<TypePtr> out;
        for (const auto& i : p->items) {
            TypePtr si = strip_singletons(i);
            if (!as<ty::QRef>(si))
                throw TypeError(TypeErrorKind::Mismatch, loc, "expected qubit references, found " + show(t));
            out.push_back(si);
        }
        return out;
    }

    void record(const std::vector<TypePtr>& refs, SourceLoc loc) {
        if (!sites) return;
        GateSite site{loc, {}};
        for (const auto& r : refs) site.refs.push_back(as<ty::QRef>(r)->sym);
        sites->push_back(std::move(site));
    }

    void gate_args(const GatePtr& g, const TypePtr& at, SourceLoc loc) {
        std::size_t dim = dim_of(g, loc);
        auto refs = refs_of(at, loc);
        if ((std::size_t{1} << refs.size()) != dim)
            throw TypeError(TypeErrorKind::DimensionMismatch, loc,
                            "gate " + print(g) + " of dimension " + std::to_string(dim) + " applied to " +
                                std::to_string(refs.size()) + " qubits");
        record(refs, loc);
        check_distinct_refs(refs, loc);
    }

    // The result must not mention q. A result that can carry a command is
    // also rejected when the body refers to the qubit at all.
    static bool carries_command(const TypePtr& t) {
        return std::visit(overloaded{
                              [](const ty::Cmd&) { return true; },
                              [](const ty::Arrow& a) { return carries_command(a.dom) || carries_command(a.cod); },
                              [](const ty::Prod& p) {
                                  return std::any_of(p.items.begin(), p.items.end(), carries_command);
                              },
                              [](const ty::Proc&) { return true; },
                              [](const auto&) { return false; },
                          },
                          t->node);
    }

    static void check_escape(const QubitSymbol& q, const std::string& binder,
                             const CmdPtr& body, const TypePtr& t, SourceLoc loc) {
        if (free_qubit_symbols(t).count(q))
            throw TypeError(TypeErrorKind::EscapingQubit, loc,
                            "result type " + show(t) + " mentions qubit " + q.name() + " outside its scope");
        if (carries_command(t)) {
            bool uses = free_qubit_symbols(body).count(q) != 0 || (!binder.empty() && free_vars(body).count(binder));
            if (uses)
                throw TypeError(TypeErrorKind::EscapingQubit, loc,
                                "higher-order result of type " + show(t) + " may capture qubit " + q.name());
        }
    }
};

}  // namespace

TypePtr infer_expr(const TypingContext& gamma, const Signature& sigma, const ExprPtr& e) {
    return Checker().expr(gamma, sigma, e);
}

TypePtr infer_cmd(const TypingContext& gamma, const Signature& sigma, const CmdPtr& m) {
    return Checker().cmd(gamma, sigma, m);
}

std::pair<TypingContext, Signature> program_environment(const QubitContext& ctx, const Term& t) {
    std::vector<QubitSymbol> syms;
    TypingContext gamma;
    for (const auto& entry : ctx) {
        syms.push_back(entry.sym);
        gamma = gamma.extended(entry.var, mk::qref(entry.sym));
    }
    for (const auto& q : free_qubit_symbols(t)) syms.push_back(q);
    return {gamma, Signature(std::move(syms))};
}

TypePtr check_program(const QubitContext& ctx, const Term& t) {
    auto [gamma, sigma] = program_environment(ctx, t);
    return std::visit(overloaded{
                          [&](const ExprPtr& e) { return infer_expr(gamma, sigma, e); },
                          [&](const CmdPtr& m) { return infer_cmd(gamma, sigma, m); },
                      },
                      t);
}

std::vector<GateSite> gate_sites(const QubitContext& ctx, const Term& t) {
    auto [gamma, sigma] = program_environment(ctx, t);
    std::vector<GateSite> sites;
    Checker c;
    c.sites = &sites;
    std::visit(overloaded{
                   [&](const ExprPtr& e) { c.expr(gamma, sigma, e); },
                   [&](const CmdPtr& m) { c.cmd(gamma, sigma, m); },
               },
               t);
    return sites;
}

}  // namespace lqs
