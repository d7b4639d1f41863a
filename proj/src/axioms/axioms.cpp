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

#include "lqs/axioms/axioms.hpp"

#include <algorithm>

#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/gates/gateset.hpp"
#include "lqs/typecheck/typecheck.hpp"

namespace lqs {

const std::vector<AxiomId>& all_axioms() {
    static const std::vector<AxiomId> ids{AxiomId::A, AxiomId::B, AxiomId::D, AxiomId::E, AxiomId::F, AxiomId::G,
                                          AxiomId::H, AxiomId::I, AxiomId::J, AxiomId::K, AxiomId::L};
    return ids;
}

char axiom_letter(AxiomId id) {
    static constexpr char letters[] = "ABDEFGHIJKL";
    return letters[static_cast<int>(id)];
}

std::optional<AxiomId> parse_axiom_id(std::string_view text) {
    if (text.size() != 1) return std::nullopt;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    for (auto id : all_axioms())
        if (axiom_letter(id) == c) return id;
    return std::nullopt;
}

const char* axiom_statement(AxiomId id) {
    switch (id) {
        case AxiomId::A: return "do {X(a); meas a} == not do {meas a}";
        case AxiomId::B: return "{D(U, V)(a; b); meas a; ret <>} == {x <- meas a; if x then V(b) else U(b); ret <>}";
        case AxiomId::D: return "do {new a in meas a} == ff";
        case AxiomId::E: return "do {new a in D(U, V)(a; b)} == do {U(b); new a in ret <>}";
        case AxiomId::F: return "do {new a in new b in {m1; SWAP(a, b); m2}} == do {new a in new b in {m1; let <a, b> = <b, a> in cmd m2}}";
        case AxiomId::G: return "do {I(e)} == ()";
        case AxiomId::H: return "do {prod(V, U)(e)} == do {U(e); V(e)}";
        case AxiomId::I: return "do {tensor(U, V)(e1, e2)} == do {U(e1); V(e2)}";
        case AxiomId::J: return "do {x <- meas a; y <- meas b; m} == do {y <- meas b; x <- meas a; m}";
        case AxiomId::K: return "do {new a in new b in m} == do {new b in new a in m}";
        case AxiomId::L: return "do {new a in {y <- meas b; m}} == do {y <- meas b; new a in m}";
    }
    return "";
}

// ---------------------------------------------------------------- schemas

namespace {

using cm::BlockItem;

ExprPtr refs(const std::vector<std::string>& names) {
    if (names.size() == 1) return mk::var(names[0]);
    std::vector<ExprPtr> items;
    for (const auto& n : names) items.push_back(mk::var(n));
    return mk::tuple(std::move(items));
}

// Context entries `prefix1 .. prefixN`, or just `prefix` when n is 1.
std::vector<std::string> add_refs(QubitContext& ctx, const std::string& prefix, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        std::string name = n == 1 ? prefix : prefix + std::to_string(i + 1);
        ctx.push_back({name, QubitSymbol::fresh(name)});
        names.push_back(name);
    }
    return names;
}

void require_dim(const GatePtr& g, std::size_t n, const char* what) {
    if (!g) throw AxiomError(std::string("missing gate parameter ") + what);
    std::size_t d;
    try {
        d = gate_dim(g);
    } catch (const GateError& e) {
        throw AxiomError(e.what());
    }
    if (d != (std::size_t{1} << n))
        throw AxiomError(std::string("gate ") + what + " has dimension " + std::to_string(d) + ", expected " +
                         std::to_string(std::size_t{1} << n));
}

ExprPtr unit_tuple() { return mk::tuple({}); }

QubitSymbol sym_at(const AxiomParams& p, std::size_t i, const char* name) {
    return i < p.syms.size() ? p.syms[i] : QubitSymbol::fresh(name);
}

CmdPtr or_unit(const CmdPtr& m) { return m ? m : mk::ret(unit_tuple()); }

// Exchanges two symbols in annotations.
CmdPtr swap_symbols(const CmdPtr& m, const QubitSymbol& a, const QubitSymbol& b) {
    QubitSymbol tmp = QubitSymbol::fresh("t");
    return rename_symbol(rename_symbol(rename_symbol(m, a, tmp), b, a), tmp, b);
}

}  // namespace

AxiomInstance instantiate(AxiomId id, const AxiomParams& p) {
    AxiomInstance inst{id, {}, nullptr, nullptr, {}};
    QubitContext& ctx = inst.context;
    switch (id) {
        case AxiomId::A: {
            add_refs(ctx, "a", 1);
            inst.lhs = mk::do_(mk::block({{std::nullopt, mk::gate_ap(mk::named(GateName::X), mk::var("a"))}},
                                         mk::meas(mk::var("a"))));
            inst.rhs = mk::block({{"x", mk::do_(mk::meas(mk::var("a")))}},
                                 mk::ret(mk::if_(mk::var("x"), mk::ff(), mk::tt())));
            // Measurement leaves a live; its residual state differs by X.
            inst.discarded = {"a"};
            break;
        }
        case AxiomId::B: {
            require_dim(p.u, p.n, "U");
            require_dim(p.v, p.n, "V");
            add_refs(ctx, "a", 1);
            auto b = refs(add_refs(ctx, "b", p.n));
            inst.lhs = mk::block({{std::nullopt, mk::diag_ap(p.u, p.v, mk::var("a"), b)},
                                  {std::nullopt, mk::meas(mk::var("a"))}},
                                 mk::ret(unit_tuple()));
            auto chosen = mk::if_(mk::var("x"), mk::box(mk::gate_ap(p.v, b)), mk::box(mk::gate_ap(p.u, b)));
            inst.rhs = mk::block({{"x", mk::meas(mk::var("a"))}, {std::nullopt, mk::bnd(chosen, "r", mk::ret(mk::var("r")))}},
                                 mk::ret(unit_tuple()));
            break;
        }
        case AxiomId::D:
            inst.lhs = mk::do_(mk::new_("a", mk::meas(mk::var("a"))));
            inst.rhs = mk::ret(mk::ff());
            break;
        case AxiomId::E: {
            require_dim(p.u, p.n, "U");
            require_dim(p.v, p.n, "V");
            auto b = refs(add_refs(ctx, "b", p.n));
            inst.lhs = mk::do_(mk::new_("a", mk::diag_ap(p.u, p.v, mk::var("a"), b)));
            inst.rhs = mk::do_(mk::block({{std::nullopt, mk::gate_ap(p.u, b)}}, mk::new_("a", mk::ret(unit_tuple()))));
            break;
        }
        case AxiomId::F: {
            QubitSymbol sa = sym_at(p, 0, "a"), sb = sym_at(p, 1, "b"), sc = sym_at(p, 2, "c");
            ctx.push_back({"c", sc});
            CmdPtr m1 = or_unit(p.m1), m2 = or_unit(p.m2);
            auto swap = mk::gate_ap(mk::named(GateName::Swap), mk::tuple({mk::var("a"), mk::var("b")}));
            inst.lhs = mk::do_(mk::new_(
                "a", mk::new_("b", mk::block({{std::nullopt, m1}, {std::nullopt, swap}}, m2), sb), sa));
            // let <a, b> = <b, a> in cmd m2; m2 sees the exchanged types.
            auto renamed = mk::let(
                mk::tuple({mk::var("b"), mk::var("a")}), "p",
                mk::let(mk::proj(1, mk::var("p")), "a",
                        mk::let(mk::proj(2, mk::var("p")), "b", mk::box(swap_symbols(m2, sa, sb)))));
            inst.rhs = mk::do_(mk::new_(
                "a", mk::new_("b", mk::block({{std::nullopt, m1}}, mk::bnd(renamed, "r", mk::ret(mk::var("r")))), sb),
                sa));
            break;
        }
        case AxiomId::G: {
            auto e = refs(add_refs(ctx, "e", p.n));
            inst.lhs = mk::do_(mk::gate_ap(mk::identity(std::size_t{1} << p.n), e));
            inst.rhs = mk::ret(unit_tuple());
            break;
        }
        case AxiomId::H: {
            require_dim(p.u, p.n, "U");
            require_dim(p.v, p.n, "V");
            auto e = refs(add_refs(ctx, "e", p.n));
            inst.lhs = mk::do_(mk::gate_ap(mk::product(p.v, p.u), e));
            inst.rhs = mk::do_(mk::block({{std::nullopt, mk::gate_ap(p.u, e)}}, mk::gate_ap(p.v, e)));
            break;
        }
        case AxiomId::I: {
            require_dim(p.u, p.m, "U");
            require_dim(p.v, p.n, "V");
            auto e1 = add_refs(ctx, "e", p.m);
            auto e2 = add_refs(ctx, "f", p.n);
            std::vector<std::string> all = e1;
            all.insert(all.end(), e2.begin(), e2.end());
            inst.lhs = mk::do_(mk::gate_ap(mk::tensor(p.u, p.v), refs(all)));
            inst.rhs = mk::do_(mk::block({{std::nullopt, mk::gate_ap(p.u, refs(e1))}}, mk::gate_ap(p.v, refs(e2))));
            break;
        }
        case AxiomId::J: {
            ctx.push_back({"a", sym_at(p, 0, "a")});
            ctx.push_back({"b", sym_at(p, 1, "b")});
            CmdPtr m = or_unit(p.m1);
            inst.lhs = mk::do_(mk::block({{"x", mk::meas(mk::var("a"))}, {"y", mk::meas(mk::var("b"))}}, m));
            inst.rhs = mk::do_(mk::block({{"y", mk::meas(mk::var("b"))}, {"x", mk::meas(mk::var("a"))}}, m));
            break;
        }
        case AxiomId::K: {
            QubitSymbol sa = sym_at(p, 0, "a"), sb = sym_at(p, 1, "b"), sc = sym_at(p, 2, "c");
            ctx.push_back({"c", sc});
            CmdPtr m = or_unit(p.m1);
            inst.lhs = mk::do_(mk::new_("a", mk::new_("b", m, sb), sa));
            inst.rhs = mk::do_(mk::new_("b", mk::new_("a", m, sa), sb));
            break;
        }
        case AxiomId::L: {
            QubitSymbol sa = sym_at(p, 0, "a"), sb = sym_at(p, 1, "b"), sc = sym_at(p, 2, "c");
            ctx.push_back({"b", sb});
            ctx.push_back({"c", sc});
            CmdPtr m = or_unit(p.m1);
            inst.lhs = mk::do_(mk::new_("a", mk::block({{"y", mk::meas(mk::var("b"))}}, m), sa));
            inst.rhs = mk::do_(mk::block({{"y", mk::meas(mk::var("b"))}}, mk::new_("a", m, sa)));
            break;
        }
    }
    return inst;
}

CmdPtr with_reset(const CmdPtr& m, const std::vector<std::string>& vars) {
    if (vars.empty()) return m;
    std::vector<BlockItem> items{{"res'", m}};
    for (const auto& v : vars) {
        items.push_back({"r'", mk::meas(mk::var(v))});
        auto flip = mk::if_(mk::var("r'"), mk::box(mk::gate_ap(mk::named(GateName::X), mk::var(v))),
                            mk::box(mk::ret(mk::unit())));
        items.push_back({std::nullopt, mk::bnd(flip, "u'", mk::ret(mk::var("u'")))});
    }
    return mk::block(std::move(items), mk::ret(mk::var("res'")));
}

// ---------------------------------------------------------------- random parameters

namespace {

CmdPtr random_sub(gen::Rng& rng, const QubitContext& ctx, gen::ResultShape shape, std::size_t locals) {
    gen::ProgramOptions o;
    o.context = ctx;
    o.max_qubits = ctx.size() + locals;
    o.max_meas = 2;
    o.max_depth = 5;
    o.gate_depth = 2;
    o.shape = shape;
    return gen::random_program(rng, o);
}

// bnd (if flag then cmd c1 else cmd c2) as name in rest
CmdPtr branch_on(const std::string& flag, CmdPtr c1, CmdPtr c2, const std::string& name, CmdPtr rest) {
    return mk::bnd(mk::if_(mk::var(flag), mk::box(std::move(c1)), mk::box(std::move(c2))), name, std::move(rest));
}

}  // namespace

AxiomParams random_params(AxiomId id, gen::Rng& rng) {
    AxiomParams p;
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    p.n = pick(1, 2);
    p.m = pick(1, 2);
    p.u = gen::random_gate(rng, id == AxiomId::I ? p.m : p.n, 4);
    p.v = gen::random_gate(rng, p.n, 4);
    p.syms = {QubitSymbol::fresh("a"), QubitSymbol::fresh("b"), QubitSymbol::fresh("c")};
    QubitContext abc{{"a", p.syms[0]}, {"b", p.syms[1]}, {"c", p.syms[2]}};
    QubitContext ab{{"a", p.syms[0]}, {"b", p.syms[1]}};
    using gen::ResultShape;
    switch (id) {
        case AxiomId::F:
            p.m1 = random_sub(rng, abc, static_cast<ResultShape>(pick(0, 2)), 1);
            p.m2 = random_sub(rng, abc, static_cast<ResultShape>(pick(0, 2)), 1);
            break;
        case AxiomId::K: p.m1 = random_sub(rng, abc, static_cast<ResultShape>(pick(0, 2)), 1); break;
        case AxiomId::J: {
            auto c1 = random_sub(rng, ab, ResultShape::Bool, 1);
            auto c2 = random_sub(rng, ab, ResultShape::Bool, 1);
            auto c3 = random_sub(rng, ab, ResultShape::Bool, 1);
            auto c4 = random_sub(rng, ab, ResultShape::Bool, 1);
            auto tail = mk::ret(mk::tuple({mk::var("x"), mk::var("y"), mk::var("u"), mk::var("v")}));
            p.m1 = branch_on("x", c1, c2, "u", branch_on("y", c3, c4, "v", tail));
            break;
        }
        case AxiomId::L: {
            auto c1 = random_sub(rng, abc, ResultShape::Bool, 1);
            auto c2 = random_sub(rng, abc, ResultShape::Bool, 1);
            p.m1 = branch_on("y", c1, c2, "u", mk::ret(mk::tuple({mk::var("y"), mk::var("u")})));
            break;
        }
        default: break;
    }
    return p;
}

AxiomCheck check_axiom(AxiomId id, const AxiomParams& params, double tol, const DenoteOptions& opts) {
    auto inst = instantiate(id, params);
    TypePtr tl, tr;
    try {
        tl = check_program(inst.context, inst.lhs);
        tr = check_program(inst.context, inst.rhs);
    } catch (const TypeError& e) {
        throw AxiomError(std::string("instance does not typecheck: ") + e.what());
    }
    if (!types_equivalent(tl, tr))
        throw AxiomError("sides have different types " + print(tl) + " and " + print(tr));
    auto rep = equiv(inst.context, with_reset(inst.lhs, inst.discarded), with_reset(inst.rhs, inst.discarded), tol, opts);
    return {rep.equivalent, rep.max_deviation};
}

AxiomSuiteResult check_axiom_suite(AxiomId id, std::size_t trials, std::uint64_t seed, double tol,
                                   const DenoteOptions& opts) {
    AxiomSuiteResult res{id, trials, 0, 0.0, {}};
    gen::Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(id) + 1)));
    for (std::size_t t = 0; t < trials; ++t) {
        auto params = random_params(id, rng);
        AxiomCheck c;
        std::string failure;
        try {
            c = check_axiom(id, params, tol, opts);
        } catch (const std::exception& e) {
            c = {false, 0.0};
            failure = e.what();
        }
        res.max_deviation = std::max(res.max_deviation, c.deviation);
        if (c.passed) {
            ++res.passed;
        } else if (res.first_failure.empty()) {
            auto inst = instantiate(id, params);
            res.first_failure = (failure.empty() ? "" : failure + "\n") + print_program(inst.lhs, inst.context) +
                                print_program(inst.rhs, inst.context);
        }
    }
    return res;
}

}  // namespace lqs
