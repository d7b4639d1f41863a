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

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "lqs/axioms/axioms.hpp"
#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/qsharp/frontend.hpp"
#include "lqs/typecheck/typecheck.hpp"

namespace lqs::qs {

std::string sanitize_name(const std::string& name) {
    static const std::set<std::string> gate_words = {"X", "Y", "Z", "H", "S", "T", "SWAP", "CNOT", "I", "D",
                                                     "adj", "prod", "tensor", "diag"};
    bool identity_word = name.size() > 1 && name[0] == 'I' &&
                         std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (is_reserved_word(name) || gate_words.count(name) || identity_word) return name + "'";
    return name;
}

const Instance* Elaboration::root(const std::string& callable) const {
    for (const auto& i : instances)
        if (i.callable == callable) return &i;
    return nullptr;
}

CmdPtr Elaboration::with_body(const CmdPtr& body) const {
    ExprPtr e = mk::box(body);
    auto needed = free_vars(body);
    for (auto it = instances.rbegin(); it != instances.rend(); ++it) {
        if (!needed.count(it->var)) continue;
        auto deps = free_vars(it->value);
        needed.insert(deps.begin(), deps.end());
        e = mk::let(it->value, it->var, e);
    }
    std::string r = fresh_var_name("r");
    return mk::bnd(e, r, mk::ret(mk::var(r)));
}

namespace {

struct Value {
    ExprPtr expr;
    TypePtr type;
};

using Env = std::map<std::string, Value>;
using Items = std::vector<cm::BlockItem>;

std::string base_name(const std::string& qualified) {
    auto p = qualified.rfind('.');
    return p == std::string::npos ? qualified : qualified.substr(p + 1);
}

// qAlice -> a
std::string symbol_display(const std::string& var) {
    if (var.size() > 1 && var[0] == 'q' && std::isupper(static_cast<unsigned char>(var[1])))
        return std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(var[1]))));
    return var;
}

QsType pattern_type(const QsPattern& p) {
    if (!p.is_tuple()) return *p.type;
    if (p.items.size() == 1) return pattern_type(p.items.front());
    QsType t;
    t.kind = p.items.empty() ? QsType::Kind::Unit : QsType::Kind::Tuple;
    t.loc = p.loc;
    for (const auto& i : p.items) t.items.push_back(pattern_type(i));
    return t;
}

std::size_t count_qubits(const QsType& t) {
    switch (t.kind) {
        case QsType::Kind::Qubit: return 1;
        case QsType::Kind::Tuple: {
            std::size_t n = 0;
            for (const auto& i : t.items) n += count_qubits(i);
            return n;
        }
        default: return 0;
    }
}

void leaf_names(const QsPattern& p, std::vector<std::string>& out) {
    if (!p.is_tuple()) {
        const QsType& t = *p.type;
        std::size_t n = count_qubits(t);
        if (n == 1) {
            out.push_back(p.name);
        } else {
            for (std::size_t i = 0; i < n; ++i) out.push_back(p.name + std::to_string(i + 1));
        }
        return;
    }
    for (const auto& i : p.items) leaf_names(i, out);
}

bool is_unit_type(const TypePtr& t) {
    auto s = strip_singletons(t);
    return as<ty::Unit>(s) != nullptr;
}

bool returns(const std::vector<QsStmt>& stmts);

bool returns(const QsStmt& s) {
    switch (s.kind) {
        case QsStmt::Kind::Return: return true;
        case QsStmt::Kind::If: return s.has_else && returns(s.body) && returns(s.else_body);
        case QsStmt::Kind::UseBlock: return returns(s.body);
        default: return false;
    }
}

bool returns(const std::vector<QsStmt>& stmts) {
    return std::any_of(stmts.begin(), stmts.end(), [](const QsStmt& s) { return returns(s); });
}

bool has_return(const std::vector<QsStmt>& stmts) {
    for (const auto& s : stmts) {
        if (s.kind == QsStmt::Kind::Return) return true;
        if (has_return(s.body) || has_return(s.else_body)) return true;
    }
    return false;
}

std::vector<QsStmt> concat(const std::vector<QsStmt>& a, const std::vector<QsStmt>& b, std::size_t from) {
    std::vector<QsStmt> out = a;
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(from), b.end());
    return out;
}

void collect_refs(const QsExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == QsExpr::Kind::Var) out.insert(base_name(e->name));
    for (const auto& a : e->args) collect_refs(a, out);
}

void collect_refs(const std::vector<QsStmt>& stmts, std::set<std::string>& out) {
    for (const auto& s : stmts) {
        collect_refs(s.expr, out);
        collect_refs(s.body, out);
        collect_refs(s.else_body, out);
    }
}

CmdPtr finish(Items items, CmdPtr last) {
    if (items.empty()) return last;
    return mk::block(std::move(items), std::move(last));
}

CmdPtr if_cmd(ExprPtr c, CmdPtr a, CmdPtr b, SourceLoc loc) {
    std::string r = fresh_var_name("r");
    return mk::bnd(mk::if_(std::move(c), mk::box(std::move(a)), mk::box(std::move(b)), loc), r, mk::ret(mk::var(r)), loc);
}

GatePtr intrinsic_gate(const std::string& name) {
    if (name == "H") return mk::named(GateName::H);
    if (name == "X") return mk::named(GateName::X);
    if (name == "Y") return mk::named(GateName::Y);
    if (name == "Z") return mk::named(GateName::Z);
    if (name == "S") return mk::named(GateName::S);
    if (name == "T") return mk::named(GateName::T);
    if (name == "I") return mk::identity(2);
    if (name == "SWAP") return mk::named(GateName::Swap);
    if (name == "CNOT") return mk::diag(mk::identity(2), mk::named(GateName::X));
    if (name == "CZ") return mk::diag(mk::identity(2), mk::named(GateName::Z));
    if (name == "CCNOT") return mk::diag(mk::identity(4), mk::diag(mk::identity(2), mk::named(GateName::X)));
    return nullptr;
}

bool is_measurement_intrinsic(const std::string& name) { return name == "M" || name == "Reset"; }

[[noreturn]] void fail(ErrorKind k, SourceLoc loc, const std::string& msg) { throw QsError(k, loc, msg); }

class Elaborator {
public:
    explicit Elaborator(const QsProgram& p) : prog_(p) {}

    Elaboration run() {
        std::set<std::string> called;
        for (const auto& c : prog_.callables) {
            std::set<std::string> refs;
            collect_refs(c.body, refs);
            refs.erase(c.name);
            called.insert(refs.begin(), refs.end());
        }
        std::vector<std::string> roots;
        for (const auto& c : prog_.callables) {
            if (called.count(c.name)) continue;
            definitional(c);
            roots.push_back(c.name);
        }
        for (const auto& c : prog_.callables) {
            bool any = std::any_of(chain_.begin(), chain_.end(), [&](const Instance& i) { return i.callable == c.name; });
            if (!any) definitional(c);
        }
        Elaboration out;
        out.instances = chain_;
        out.roots = roots;
        ExprPtr e = mk::tuple({});
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) e = mk::let(it->value, it->var, e);
        out.term = e;
        auto syms = free_qubit_symbols(e);
        out.free_symbols.assign(syms.begin(), syms.end());
        out.namespaces = prog_.namespaces;
        out.opens = prog_.opens;
        return out;
    }

    GatePtr mat_gate(const std::string& name, SourceLoc loc) {
        if (auto it = mat_cache_.find(name); it != mat_cache_.end()) return it->second;
        const QsCallable* c = prog_.find(name);
        if (!c) fail(ErrorKind::UnknownCallable, loc, "unknown callable '" + name + "'");
        if (!c->is_operation) fail(ErrorKind::UnsupportedFeature, loc, "functor applied to function '" + name + "'");
        QsType pt = pattern_type(c->params);
        std::size_t k = count_qubits(pt);
        if (!all_qubits(pt) || k == 0)
            fail(ErrorKind::UnsupportedFeature, loc, "functor applied to '" + name + "', whose parameters are not all qubits");

        auto saved_chain = chain_;
        auto saved_index = index_;
        auto saved_counts = name_count_;
        std::vector<QubitSymbol> syms;
        std::vector<ExprPtr> locs;
        for (std::size_t i = 0; i < k; ++i) {
            syms.push_back(QubitSymbol::fresh("u" + std::to_string(i)));
            locs.push_back(mk::qloc(syms.back()));
        }
        const Instance inst = instance(*c, syms, loc);
        Elaboration scratch;
        scratch.instances = chain_;
        CmdPtr run = scratch.with_body(mk::call(mk::var(inst.var), locs.size() == 1 ? locs.front() : mk::tuple(locs)));
        chain_ = std::move(saved_chain);
        index_ = std::move(saved_index);
        name_count_ = std::move(saved_counts);

        SimplifyOptions so;
        so.gate_rules = false;
        so.fold_measurements = false;
        so.drop_allocations = false;
        auto unfolded = simplify(desugar(run), so).cmd;
        std::vector<std::pair<GatePtr, std::vector<std::size_t>>> seq;
        collect_gates(unfolded, syms, seq, name, loc);
        std::size_t dim = std::size_t{1} << k;
        GatePtr g;
        for (const auto& [gate, pos] : seq) {
            GatePtr step = embed_gate(gate, pos, k);
            g = g ? mk::product(step, g) : step;
        }
        if (!g) g = mk::identity(dim);
        mat_cache_[name] = g;
        return g;
    }

private:
    using Key = std::pair<std::string, std::vector<std::uint64_t>>;

    static bool all_qubits(const QsType& t) {
        if (t.kind == QsType::Kind::Qubit) return true;
        if (t.kind == QsType::Kind::Tuple)
            return std::all_of(t.items.begin(), t.items.end(), [](const QsType& i) { return all_qubits(i); });
        return false;
    }

    void collect_gates(const CmdPtr& m, const std::vector<QubitSymbol>& syms,
                       std::vector<std::pair<GatePtr, std::vector<std::size_t>>>& out, const std::string& name,
                       SourceLoc loc) {
        auto position = [&](const ExprPtr& e) -> std::size_t {
            if (const auto* q = as<ex::QLoc>(e)) {
                auto it = std::find(syms.begin(), syms.end(), q->sym);
                if (it != syms.end()) return static_cast<std::size_t>(it - syms.begin());
            }
            fail(ErrorKind::NonAdjointable, loc, "'" + name + "' applies a gate to a qubit it does not receive");
        };
        auto positions = [&](const ExprPtr& args, std::vector<std::size_t>& pos) {
            if (const auto* t = as<ex::Tuple>(args)) {
                for (const auto& i : t->items) pos.push_back(position(i));
            } else {
                pos.push_back(position(args));
            }
        };
        if (const auto* r = as<cm::Ret>(m)) {
            if (as<ex::Unit>(r->value)) return;
            if (const auto* t = as<ex::Tuple>(r->value); t && t->items.empty()) return;
            fail(ErrorKind::NonAdjointable, loc, "'" + name + "' returns a value");
        }
        if (const auto* b = as<cm::Bnd>(m)) {
            if (const auto* inner = as<ex::Box>(b->boxed)) {
                collect_gates(inner->cmd, syms, out, name, loc);
                collect_gates(b->rest, syms, out, name, loc);
                return;
            }
        }
        if (const auto* g = as<cm::GateAp>(m)) {
            std::vector<std::size_t> pos;
            positions(g->args, pos);
            out.emplace_back(g->gate, std::move(pos));
            return;
        }
        if (const auto* d = as<cm::DiagAp>(m)) {
            std::vector<std::size_t> pos{position(d->control)};
            positions(d->targets, pos);
            out.emplace_back(mk::diag(d->zero, d->one), std::move(pos));
            return;
        }
        if (as<cm::Meas>(m)) fail(ErrorKind::NonAdjointable, loc, "'" + name + "' measures a qubit");
        if (as<cm::New>(m) || as<cm::Scope>(m)) fail(ErrorKind::NonAdjointable, loc, "'" + name + "' allocates a qubit");
        fail(ErrorKind::NonAdjointable, loc, "'" + name + "' does not unfold to a gate sequence");
    }

    void definitional(const QsCallable& c) {
        std::vector<std::string> names;
        leaf_names(c.params, names);
        std::vector<QubitSymbol> syms;
        for (const auto& n : names) syms.push_back(QubitSymbol::fresh(symbol_display(n)));
        instance(c, syms, c.loc);
    }

    // ------------------------------------------------------------ instances

    TypePtr lower(const QsType& t, const std::vector<QubitSymbol>* syms, std::size_t& next) {
        switch (t.kind) {
            case QsType::Kind::Qubit:
                if (syms) return mk::qref((*syms)[next++]);
                return mk::qref(QubitSymbol::fresh("q"));
            case QsType::Kind::Bool:
            case QsType::Kind::Result: return mk::bool_t();
            case QsType::Kind::Unit: return mk::unit_t();
            case QsType::Kind::Tuple: {
                std::vector<TypePtr> items;
                for (const auto& i : t.items) items.push_back(lower(i, syms, next));
                return mk::prod(std::move(items));
            }
            case QsType::Kind::Function:
            case QsType::Kind::Operation: {
                std::size_t none = 0;
                auto dom = lower(t.items[0], nullptr, none);
                auto cod = lower(t.items[1], nullptr, none);
                return mk::arrow(dom, t.kind == QsType::Kind::Operation ? mk::cmd_t(cod) : cod);
            }
        }
        return mk::unit_t();
    }

    void match_symbols(const QsType& t, const TypePtr& arg, std::vector<QubitSymbol>& out, SourceLoc loc) {
        TypePtr a = strip_singletons(arg);
        switch (t.kind) {
            case QsType::Kind::Qubit:
                if (const auto* q = as<ty::QRef>(a)) {
                    out.push_back(q->sym);
                    return;
                }
                fail(ErrorKind::Unification, loc, "argument is not a qubit");
            case QsType::Kind::Tuple: {
                const auto* p = as<ty::Prod>(a);
                if (!p || p->items.size() != t.items.size())
                    fail(ErrorKind::Unification, loc, "argument tuple has the wrong shape");
                for (std::size_t i = 0; i < t.items.size(); ++i) match_symbols(t.items[i], p->items[i], out, loc);
                return;
            }
            default: return;
        }
    }

    const Instance& instance(const QsCallable& c, const std::vector<QubitSymbol>& syms, SourceLoc loc) {
        Key key{c.name, {}};
        for (const auto& s : syms) key.second.push_back(s.id());
        if (auto it = index_.find(key); it != index_.end()) return chain_[it->second];
        if (in_progress_.count(c.name)) fail(ErrorKind::UnsupportedFeature, loc, "recursive callable '" + c.name + "'");
        in_progress_.insert(c.name);

        QsType pt = pattern_type(c.params);
        std::size_t next = 0;
        TypePtr dom = lower(pt, &syms, next);
        TypePtr cod = lower(c.result, nullptr, next);

        Env env;
        std::vector<std::pair<std::string, ExprPtr>> lets;
        std::string binder;
        const QsPattern* single = c.params.items.size() == 1 ? &c.params.items.front() : nullptr;
        if (c.params.items.empty()) {
            binder = fresh_var_name("u");
        } else if (single && !single->is_tuple()) {
            binder = sanitize_name(single->name);
            env[single->name] = {mk::var(binder), dom};
        } else {
            binder = fresh_var_name("p");
            auto p = mk::var(binder);
            if (single) {
                bind_pattern(*single, p, dom, env, lets, loc);
            } else {
                bind_pattern(c.params, p, dom, env, lets, loc);
            }
        }
        ExprPtr body;
        if (c.is_operation) {
            body = mk::box(op_stmts(env, c.body, 0), c.loc);
        } else {
            body = fn_stmts(env, c.body, 0);
        }
        for (auto it = lets.rbegin(); it != lets.rend(); ++it) body = mk::let(it->second, it->first, body);

        Instance inst;
        inst.callable = c.name;
        int& count = name_count_[c.name];
        ++count;
        inst.var = sanitize_name(c.name) + (count == 1 ? "" : "_" + std::to_string(count));
        inst.symbols = syms;
        inst.value = mk::lam(binder, dom, body, c.loc);
        inst.type = mk::arrow(dom, c.is_operation ? mk::cmd_t(cod) : cod);
        in_progress_.erase(c.name);
        index_[key] = chain_.size();
        chain_.push_back(std::move(inst));
        return chain_.back();
    }

    // Binds the names of `p` to projections of `src`.
    void bind_pattern(const QsPattern& p, const ExprPtr& src, const TypePtr& type, Env& env,
                      std::vector<std::pair<std::string, ExprPtr>>& lets, SourceLoc loc) {
        if (!p.is_tuple()) {
            std::string x = sanitize_name(p.name);
            lets.emplace_back(x, src);
            env[p.name] = {mk::var(x), type};
            return;
        }
        if (p.items.size() == 1) return bind_pattern(p.items.front(), src, type, env, lets, loc);
        TypePtr t = strip_singletons(type);
        const auto* prod = as<ty::Prod>(t);
        if (!prod || prod->items.size() != p.items.size())
            fail(ErrorKind::Unification, p.loc, "tuple pattern does not match the bound value");
        ExprPtr base = src;
        if (!as<ex::Var>(src)) {
            std::string tmp = fresh_var_name("p");
            lets.emplace_back(tmp, src);
            base = mk::var(tmp);
        }
        for (std::size_t i = 0; i < p.items.size(); ++i)
            bind_pattern(p.items[i], mk::proj(i + 1, base), prod->items[i], env, lets, loc);
    }

    // ------------------------------------------------------------ operations

    CmdPtr op_stmts(Env env, const std::vector<QsStmt>& stmts, std::size_t from) {
        Items items;
        bool tail_effect = false;
        for (std::size_t i = from; i < stmts.size(); ++i) {
            const QsStmt& s = stmts[i];
            tail_effect = false;
            switch (s.kind) {
                case QsStmt::Kind::Let: {
                    Value v = expr(env, s.expr, &items);
                    if (!s.pattern.is_tuple() && rename_temp(v, items, sanitize_name(s.pattern.name))) {
                        env[s.pattern.name] = {mk::var(sanitize_name(s.pattern.name)), v.type};
                        break;
                    }
                    std::vector<std::pair<std::string, ExprPtr>> lets;
                    bind_pattern(s.pattern, v.expr, v.type, env, lets, s.loc);
                    ExprPtr body = mk::box(op_stmts(env, stmts, i + 1));
                    for (auto it = lets.rbegin(); it != lets.rend(); ++it)
                        body = mk::let(it->second, it->first, body, s.loc);
                    std::string r = fresh_var_name("r");
                    return finish(std::move(items), mk::bnd(body, r, mk::ret(mk::var(r)), s.loc));
                }
                case QsStmt::Kind::Use: {
                    auto qubits = allocations(s.pattern, s.expr);
                    for (auto& [name, sym] : qubits) env[name] = {mk::var(sanitize_name(name)), mk::qref(sym)};
                    CmdPtr body = op_stmts(env, stmts, i + 1);
                    return finish(std::move(items), wrap_new(qubits, body, s.loc));
                }
                case QsStmt::Kind::UseBlock: {
                    auto qubits = allocations(s.pattern, s.expr);
                    Env inner = env;
                    for (auto& [name, sym] : qubits) inner[name] = {mk::var(sanitize_name(name)), mk::qref(sym)};
                    if (has_return(s.body)) {
                        auto merged = returns(s.body) ? s.body : concat(s.body, stmts, i + 1);
                        return finish(std::move(items), wrap_new(qubits, op_stmts(inner, merged, 0), s.loc));
                    }
                    items.push_back({std::nullopt, wrap_new(qubits, op_stmts(inner, s.body, 0), s.loc)});
                    tail_effect = true;
                    break;
                }
                case QsStmt::Kind::If: {
                    Value c = expr(env, s.expr, &items);
                    if (has_return(s.body) || has_return(s.else_body)) {
                        auto then_b = returns(s.body) ? s.body : concat(s.body, stmts, i + 1);
                        auto else_b = returns(s.else_body) ? s.else_body : concat(s.else_body, stmts, i + 1);
                        return finish(std::move(items),
                                      if_cmd(c.expr, op_stmts(env, then_b, 0), op_stmts(env, else_b, 0), s.loc));
                    }
                    CmdPtr else_c = s.has_else ? op_stmts(env, s.else_body, 0) : mk::ret(mk::unit(s.loc), s.loc);
                    items.push_back({std::nullopt, if_cmd(c.expr, op_stmts(env, s.body, 0), else_c, s.loc)});
                    tail_effect = true;
                    break;
                }
                case QsStmt::Kind::Return: {
                    Value v = expr(env, s.expr, &items);
                    return finish(std::move(items), mk::ret(v.expr, s.loc));
                }
                case QsStmt::Kind::Expr: {
                    std::size_t before = items.size();
                    Value v = expr(env, s.expr, &items);
                    if (items.size() > before) {
                        discard_temp(v, items);
                        tail_effect = is_unit_type(v.type) && !items.back().binder;
                    }
                    break;
                }
            }
        }
        if (tail_effect) {
            CmdPtr last = items.back().cmd;
            items.pop_back();
            return finish(std::move(items), last);
        }
        return finish(std::move(items), mk::ret(mk::unit()));
    }

    std::vector<std::pair<std::string, QubitSymbol>> allocations(const QsPattern& p, const QsExprPtr& init) {
        std::vector<std::pair<std::string, QubitSymbol>> out;
        collect_allocations(p, init, out);
        return out;
    }

    void collect_allocations(const QsPattern& p, const QsExprPtr& init,
                             std::vector<std::pair<std::string, QubitSymbol>>& out) {
        if (!p.is_tuple()) {
            if (init->kind != QsExpr::Kind::QubitAlloc)
                fail(ErrorKind::UnsupportedFeature, init->loc, "unsupported: qubit initializer other than Qubit()");
            out.emplace_back(p.name, QubitSymbol::fresh(symbol_display(p.name)));
            return;
        }
        if (init->kind != QsExpr::Kind::Tuple || init->args.size() != p.items.size())
            fail(ErrorKind::Unification, init->loc, "qubit initializer does not match the pattern");
        for (std::size_t i = 0; i < p.items.size(); ++i) collect_allocations(p.items[i], init->args[i], out);
    }

    static CmdPtr wrap_new(const std::vector<std::pair<std::string, QubitSymbol>>& qubits, CmdPtr body, SourceLoc loc) {
        for (auto it = qubits.rbegin(); it != qubits.rend(); ++it) body = mk::new_(sanitize_name(it->first), body, it->second, loc);
        return body;
    }

    bool rename_temp(const Value& v, Items& items, const std::string& x) {
        const auto* var = as<ex::Var>(v.expr);
        if (!var || items.empty() || !temps_.count(var->name) || items.back().binder != var->name) return false;
        items.back().binder = x;
        return true;
    }

    void discard_temp(const Value& v, Items& items) {
        const auto* var = as<ex::Var>(v.expr);
        if (var && !items.empty() && temps_.count(var->name) && items.back().binder == var->name)
            items.back().binder.reset();
    }

    // ------------------------------------------------------------ functions

    ExprPtr fn_stmts(Env env, const std::vector<QsStmt>& stmts, std::size_t from) {
        for (std::size_t i = from; i < stmts.size(); ++i) {
            const QsStmt& s = stmts[i];
            switch (s.kind) {
                case QsStmt::Kind::Let: {
                    Value v = expr(env, s.expr, nullptr);
                    std::vector<std::pair<std::string, ExprPtr>> lets;
                    bind_pattern(s.pattern, v.expr, v.type, env, lets, s.loc);
                    ExprPtr body = fn_stmts(env, stmts, i + 1);
                    for (auto it = lets.rbegin(); it != lets.rend(); ++it)
                        body = mk::let(it->second, it->first, body, s.loc);
                    return body;
                }
                case QsStmt::Kind::Return: return expr(env, s.expr, nullptr).expr;
                case QsStmt::Kind::If: {
                    Value c = expr(env, s.expr, nullptr);
                    if (!has_return(s.body) && !has_return(s.else_body)) break;
                    auto then_b = returns(s.body) ? s.body : concat(s.body, stmts, i + 1);
                    auto else_b = returns(s.else_body) ? s.else_body : concat(s.else_body, stmts, i + 1);
                    return mk::if_(c.expr, fn_stmts(env, then_b, 0), fn_stmts(env, else_b, 0), s.loc);
                }
                case QsStmt::Kind::Use:
                case QsStmt::Kind::UseBlock:
                    fail(ErrorKind::UnsupportedFeature, s.loc, "unsupported: qubit allocation in a function");
                case QsStmt::Kind::Expr: expr(env, s.expr, nullptr); break;
            }
        }
        return mk::unit();
    }

    // ------------------------------------------------------------ expressions

    std::string push(Items* items, CmdPtr m, SourceLoc loc) {
        if (!items) fail(ErrorKind::UnsupportedFeature, loc, "unsupported: operation call inside a function");
        std::string t = fresh_var_name("r");
        temps_.insert(t);
        items->push_back({t, std::move(m)});
        return t;
    }

    Value expr(const Env& env, const QsExprPtr& e, Items* items) {
        SourceLoc loc = e->loc;
        switch (e->kind) {
            case QsExpr::Kind::Var: {
                if (auto it = env.find(e->name); it != env.end()) return it->second;
                std::string name = base_name(e->name);
                if (const QsCallable* c = prog_.find(name)) {
                    std::vector<std::string> names;
                    leaf_names(c->params, names);
                    std::vector<QubitSymbol> syms;
                    for (const auto& n : names) syms.push_back(QubitSymbol::fresh(symbol_display(n)));
                    const Instance& inst = instance(*c, syms, loc);
                    return {mk::var(inst.var, loc), inst.type};
                }
                if (intrinsic_gate(name) || is_measurement_intrinsic(name))
                    fail(ErrorKind::UnsupportedFeature, loc, "unsupported: intrinsic '" + name + "' used as a value");
                fail(ErrorKind::UnknownVariable, loc, "unknown variable '" + e->name + "'");
            }
            case QsExpr::Kind::Bool:
            case QsExpr::Kind::Result: return {mk::boolean(e->value, loc), mk::bool_t()};
            case QsExpr::Kind::Unit: return {mk::unit(loc), mk::unit_t()};
            case QsExpr::Kind::Tuple: {
                std::vector<ExprPtr> es;
                std::vector<TypePtr> ts;
                for (const auto& a : e->args) {
                    Value v = expr(env, a, items);
                    es.push_back(v.expr);
                    ts.push_back(v.type);
                }
                return {mk::tuple(std::move(es), loc), mk::prod(std::move(ts))};
            }
            case QsExpr::Kind::QubitAlloc:
                fail(ErrorKind::UnsupportedFeature, loc, "unsupported: Qubit() outside a use statement");
            case QsExpr::Kind::Array: fail(ErrorKind::UnsupportedFeature, loc, "unsupported: arrays");
            case QsExpr::Kind::Adjoint:
            case QsExpr::Kind::Controlled:
                fail(ErrorKind::UnsupportedFeature, loc, "unsupported: functor application used as a value");
            case QsExpr::Kind::Not: {
                Value v = expr(env, e->args[0], items);
                return {mk::if_(v.expr, mk::ff(loc), mk::tt(loc), loc), mk::bool_t()};
            }
            case QsExpr::Kind::And:
            case QsExpr::Kind::Or: {
                Value l = expr(env, e->args[0], items);
                Value r = pure_operand(env, e->args[1], items);
                if (e->kind == QsExpr::Kind::And) return {mk::if_(l.expr, r.expr, mk::ff(loc), loc), mk::bool_t()};
                return {mk::if_(l.expr, mk::tt(loc), r.expr, loc), mk::bool_t()};
            }
            case QsExpr::Kind::Cond: {
                Value c = expr(env, e->args[0], items);
                Value a = pure_operand(env, e->args[1], items);
                Value b = pure_operand(env, e->args[2], items);
                return {mk::if_(c.expr, a.expr, b.expr, loc), a.type};
            }
            case QsExpr::Kind::Eq:
            case QsExpr::Kind::Neq: {
                const QsExprPtr* lit = nullptr;
                const QsExprPtr* other = nullptr;
                if (e->args[1]->kind == QsExpr::Kind::Result) {
                    lit = &e->args[1];
                    other = &e->args[0];
                } else if (e->args[0]->kind == QsExpr::Kind::Result) {
                    lit = &e->args[0];
                    other = &e->args[1];
                } else {
                    fail(ErrorKind::UnsupportedFeature, loc, "unsupported: equality other than comparison with One or Zero");
                }
                Value v = expr(env, *other, items);
                bool positive = (*lit)->value == (e->kind == QsExpr::Kind::Eq);
                if (positive) return {v.expr, mk::bool_t()};
                return {mk::if_(v.expr, mk::ff(loc), mk::tt(loc), loc), mk::bool_t()};
            }
            case QsExpr::Kind::Call: return call(env, e, items);
        }
        fail(ErrorKind::Syntax, loc, "unexpected expression");
    }

    Value pure_operand(const Env& env, const QsExprPtr& e, Items* items) {
        std::size_t before = items ? items->size() : 0;
        Value v = expr(env, e, items);
        if (items && items->size() != before)
            fail(ErrorKind::UnsupportedFeature, e->loc, "unsupported: operation call in a conditionally evaluated operand");
        return v;
    }

    Value argument(const Env& env, const std::vector<QsExprPtr>& args, std::size_t from, Items* items, SourceLoc loc) {
        std::vector<ExprPtr> es;
        std::vector<TypePtr> ts;
        for (std::size_t i = from; i < args.size(); ++i) {
            Value v = expr(env, args[i], items);
            es.push_back(v.expr);
            ts.push_back(v.type);
        }
        if (es.empty()) return {mk::unit(loc), mk::unit_t()};
        if (es.size() == 1) return {es.front(), ts.front()};
        return {mk::tuple(std::move(es), loc), mk::prod(std::move(ts))};
    }

    Value call(const Env& env, const QsExprPtr& e, Items* items) {
        SourceLoc loc = e->loc;
        const QsExprPtr& callee = e->args[0];
        if (callee->kind == QsExpr::Kind::Adjoint || callee->kind == QsExpr::Kind::Controlled ||
            (callee->kind == QsExpr::Kind::Var && !env.count(callee->name) && !prog_.find(base_name(callee->name)) &&
             intrinsic_gate(base_name(callee->name)))) {
            std::vector<QsExprPtr> args(e->args.begin() + 1, e->args.end());
            auto [g, qubits] = functor_gate(env, callee, args, items, loc);
            CmdPtr m;
            auto pack = [&](std::size_t from) {
                std::vector<ExprPtr> rest(qubits.begin() + static_cast<std::ptrdiff_t>(from), qubits.end());
                return rest.size() == 1 ? rest.front() : mk::tuple(std::move(rest), loc);
            };
            if (const auto* d = as<gate::Diag>(g)) {
                m = mk::diag_ap(d->zero, d->one, qubits.front(), pack(1), loc);
            } else {
                m = mk::gate_ap(g, pack(0), loc);
            }
            push(items, m, loc);
            items->back().binder.reset();
            return {mk::unit(loc), mk::unit_t()};
        }
        if (callee->kind != QsExpr::Kind::Var)
            fail(ErrorKind::UnsupportedFeature, loc, "unsupported: call of a computed callable");
        Value arg = argument(env, e->args, 1, items, loc);
        if (auto it = env.find(callee->name); it != env.end()) {
            TypePtr t = strip_singletons(it->second.type);
            const auto* arrow = as<ty::Arrow>(t);
            if (!arrow) fail(ErrorKind::Unification, loc, "'" + callee->name + "' is not callable");
            if (const auto* c = as<ty::Cmd>(arrow->cod)) {
                std::string r = push(items, mk::call(it->second.expr, arg.expr, loc), loc);
                return {mk::var(r, loc), c->ret};
            }
            return {mk::app(it->second.expr, arg.expr, loc), arrow->cod};
        }
        std::string name = base_name(callee->name);
        if (const QsCallable* c = prog_.find(name)) {
            std::vector<QubitSymbol> syms;
            match_symbols(pattern_type(c->params), arg.type, syms, loc);
            const Instance& inst = instance(*c, syms, loc);
            const auto* arrow = as<ty::Arrow>(inst.type);
            if (c->is_operation) {
                std::string r = push(items, mk::call(mk::var(inst.var, loc), arg.expr, loc), loc);
                return {mk::var(r, loc), as<ty::Cmd>(arrow->cod)->ret};
            }
            return {mk::app(mk::var(inst.var, loc), arg.expr, loc), arrow->cod};
        }
        if (name == "M") {
            std::string r = push(items, mk::meas(arg.expr, loc), loc);
            return {mk::var(r, loc), mk::bool_t()};
        }
        if (name == "Reset") {
            std::string r = fresh_var_name("r");
            auto body = mk::block({{r, mk::meas(arg.expr, loc)}},
                                  if_cmd(mk::var(r), mk::gate_ap(mk::named(GateName::X), arg.expr, loc),
                                         mk::ret(mk::unit(loc), loc), loc),
                                  loc);
            push(items, body, loc);
            items->back().binder.reset();
            return {mk::unit(loc), mk::unit_t()};
        }
        fail(ErrorKind::UnknownCallable, loc, "unknown callable '" + callee->name + "'");
    }

    std::pair<GatePtr, std::vector<ExprPtr>> functor_gate(const Env& env, const QsExprPtr& f,
                                                          const std::vector<QsExprPtr>& args, Items* items,
                                                          SourceLoc loc) {
        if (f->kind == QsExpr::Kind::Controlled) {
            if (args.size() != 2 || args[0]->kind != QsExpr::Kind::Array)
                fail(ErrorKind::UnsupportedFeature, loc,
                     "unsupported: Controlled needs an array literal of controls and an argument tuple");
            auto [g, qubits] = functor_gate(env, f->args[0], {args[1]}, items, loc);
            std::vector<ExprPtr> controls;
            for (const auto& c : args[0]->args) {
                auto flat = flatten(expr(env, c, items), loc);
                controls.insert(controls.end(), flat.begin(), flat.end());
            }
            for (std::size_t i = 0; i < controls.size(); ++i) g = mk::diag(mk::identity(gate_dim(g)), g);
            controls.insert(controls.end(), qubits.begin(), qubits.end());
            return {g, controls};
        }
        if (f->kind == QsExpr::Kind::Adjoint) {
            auto [g, qubits] = functor_gate(env, f->args[0], args, items, loc);
            return {mk::adjoint(g), qubits};
        }
        if (f->kind != QsExpr::Kind::Var)
            fail(ErrorKind::UnsupportedFeature, loc, "unsupported: functor applied to a computed callable");
        std::string name = base_name(f->name);
        GatePtr g;
        if (env.count(f->name)) {
            fail(ErrorKind::UnsupportedFeature, loc, "unsupported: functor applied to a callable parameter");
        } else if (prog_.find(name)) {
            g = mat_gate(name, loc);
        } else if (auto ig = intrinsic_gate(name)) {
            g = ig;
        } else if (is_measurement_intrinsic(name)) {
            fail(ErrorKind::NonAdjointable, loc, "'" + name + "' measures its argument");
        } else {
            fail(ErrorKind::UnknownCallable, loc, "unknown callable '" + f->name + "'");
        }
        std::vector<ExprPtr> qubits = flatten(argument(env, args, 0, items, loc), loc);
        if (qubits.size() != gate_arity(g))
            fail(ErrorKind::Unification, loc,
                 "'" + name + "' acts on " + std::to_string(gate_arity(g)) + " qubits but receives " +
                     std::to_string(qubits.size()));
        return {g, qubits};
    }

    std::vector<ExprPtr> flatten(const Value& v, SourceLoc loc) {
        TypePtr t = strip_singletons(v.type);
        if (as<ty::QRef>(t)) return {v.expr};
        if (const auto* p = as<ty::Prod>(t)) {
            std::vector<ExprPtr> out;
            const auto* tup = as<ex::Tuple>(v.expr);
            for (std::size_t i = 0; i < p->items.size(); ++i) {
                ExprPtr item = tup ? tup->items[i] : mk::proj(i + 1, v.expr, loc);
                auto sub = flatten({item, p->items[i]}, loc);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        fail(ErrorKind::Unification, loc, "expected qubit arguments");
    }

    const QsProgram& prog_;
    std::vector<Instance> chain_;
    std::map<Key, std::size_t> index_;
    std::set<std::string> in_progress_;
    std::map<std::string, int> name_count_;
    std::map<std::string, GatePtr> mat_cache_;
    std::set<std::string> temps_;
};

}  // namespace

Elaboration elaborate(const QsProgram& program) { return Elaborator(program).run(); }

Elaboration elaborate_source(std::string_view source) {
    auto p = parse_qsharp(source);
    return elaborate(p);
}

GatePtr mat_gate(const QsProgram& program, const std::string& callable) {
    Elaborator e(program);
    return e.mat_gate(callable, {});
}

UnitaryMatrix mat(const QsProgram& program, const std::string& callable) {
    return mat_of_gate(mat_gate(program, callable));
}

GatePtr embed_gate(const GatePtr& g, const std::vector<std::size_t>& positions, std::size_t n) {
    std::size_t k = positions.size();
    if (k == 0 || k > n) throw GateError("bad embedding");
    auto pad = [&](GatePtr core, std::size_t before, std::size_t width) {
        std::size_t after = n - before - width;
        if (after > 0) core = mk::tensor(core, mk::identity(std::size_t{1} << after));
        if (before > 0) core = mk::tensor(mk::identity(std::size_t{1} << before), core);
        return core;
    };
    bool contiguous = true;
    for (std::size_t i = 1; i < k; ++i) contiguous = contiguous && positions[i] == positions[0] + i;
    if (contiguous) return pad(g, positions[0], k);
    // Move the targets to the front with adjacent swaps, act there, undo.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    GatePtr perm;
    for (std::size_t j = 0; j < k; ++j) {
        auto at = static_cast<std::size_t>(std::find(order.begin(), order.end(), positions[j]) - order.begin());
        for (std::size_t i = at; i > j; --i) {
            GatePtr sw = pad(mk::named(GateName::Swap), i - 1, 2);
            perm = perm ? mk::product(sw, perm) : sw;
            std::swap(order[i], order[i - 1]);
        }
    }
    GatePtr core = pad(g, 0, k);
    if (!perm) return core;
    return mk::product(mk::adjoint(perm), mk::product(core, perm));
}

}  // namespace lqs::qs
