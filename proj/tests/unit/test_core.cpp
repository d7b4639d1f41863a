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

#include <doctest.h>

#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/gen/generators.hpp"

using namespace lqs;

namespace {

CmdPtr cmd_of(const std::string& text) {
    auto t = parse_core(text);
    REQUIRE(std::holds_alternative<CmdPtr>(t));
    return std::get<CmdPtr>(t);
}

ExprPtr expr_of(const std::string& text) {
    auto t = parse_core(text);
    REQUIRE(std::holds_alternative<ExprPtr>(t));
    return std::get<ExprPtr>(t);
}

}  // namespace

TEST_CASE("symbols compare by id") {
    auto a = QubitSymbol::fresh("q");
    auto b = QubitSymbol::fresh("q");
    CHECK(a != b);
    CHECK(a == a);
    CHECK(a.name() == b.name());
    CHECK(a.id() < b.id());
}

TEST_CASE("parse ret of empty tuple") {
    auto m = cmd_of("ret <>");
    const auto* r = as<cm::Ret>(m);
    REQUIRE(r);
    const auto* t = as<ex::Tuple>(r->value);
    REQUIRE(t);
    CHECK(t->items.empty());
    CHECK(alpha_eq(m, cmd_of("ret ⟨⟩")));
}

TEST_CASE("parse new and meas") {
    auto m = cmd_of("new a in meas a");
    const auto* n = as<cm::New>(m);
    REQUIRE(n);
    CHECK(n->binder == "a");
    const auto* me = as<cm::Meas>(n->body);
    REQUIRE(me);
    REQUIRE(as<ex::Var>(me->target));
    CHECK(as<ex::Var>(me->target)->name == "a");
}

TEST_CASE("do block desugars to binds") {
    auto m = cmd_of("do {X(a); meas a}");
    CHECK(as<cm::Do>(m));
    auto d = desugar(m);
    // bnd (cmd (bnd (cmd X(a)) as _ in meas a)) as x in ret x
    const auto* outer = as<cm::Bnd>(d);
    REQUIRE(outer);
    const auto* box = as<ex::Box>(outer->boxed);
    REQUIRE(box);
    const auto* inner = as<cm::Bnd>(box->cmd);
    REQUIRE(inner);
    CHECK(inner->binder == "_");
    const auto* gate_box = as<ex::Box>(inner->boxed);
    REQUIRE(gate_box);
    CHECK(as<cm::GateAp>(gate_box->cmd));
    CHECK(as<cm::Meas>(inner->rest));
    CHECK(alpha_eq(d, cmd_of("bnd cmd bnd cmd X(a) as _ in meas a as y in ret y")));
}

TEST_CASE("desugar derived forms") {
    CHECK(alpha_eq(desugar(cmd_of("do {meas a}")), cmd_of("bnd cmd meas a as x in ret x")));
    CHECK(alpha_eq(desugar(expr_of("proc (x : unit) {ret x}")), expr_of("fun (x : unit) cmd ret x")));
    auto single = cmd_of("{meas a}");
    CHECK(alpha_eq(desugar(single), cmd_of("meas a")));
    CHECK(alpha_eq(desugar(cmd_of("call f(a)")), cmd_of("bnd f(a) as x in ret x")));
    CHECK(alpha_eq(desugar(cmd_of("call f")), cmd_of("bnd f(()) as x in ret x")));
    SymbolTable st;
    auto t = parse_type("qref[a] => bool", st);
    CHECK(alpha_eq(desugar(t), parse_type("qref[a] -> cmd(bool)", st)));
    auto multi = desugar(cmd_of("{x <- meas a; y <- meas b; ret <x, y>}"));
    CHECK(alpha_eq(multi, cmd_of("bnd cmd meas a as x in bnd cmd meas b as y in ret <x, y>")));
}

TEST_CASE("desugar is idempotent") {
    for (const char* src : {"do {x <- meas a; X(a); ret x}", "call (proc (u : unit) {do meas a})",
                            "{ret tt}", "new a in {H(a); D(I2, X)(a; b); meas a}"}) {
        auto once = desugar(cmd_of(src));
        CHECK(structurally_equal(desugar(once), once));
        CHECK(is_core(once));
    }
}

TEST_CASE("substitution") {
    auto r = subst(mk::tt(), "x", mk::if_(mk::var("x"), mk::unit(), mk::unit()));
    CHECK(structurally_equal(r, mk::if_(mk::tt(), mk::unit(), mk::unit())));

    auto q = QubitSymbol::fresh("q");
    auto m = subst(mk::qloc(q), "x", mk::meas(mk::var("x")));
    const auto* me = as<cm::Meas>(m);
    REQUIRE(me);
    REQUIRE(as<ex::QLoc>(me->target));
    CHECK(as<ex::QLoc>(me->target)->sym == q);

    // [y/x] fun (y:bool) x  ==  fun (y':bool) y
    auto lam = mk::lam("y", mk::bool_t(), mk::var("x"));
    auto out = subst(mk::var("y"), "x", lam);
    const auto* l = as<ex::Lam>(out);
    REQUIRE(l);
    CHECK(l->binder != "y");
    REQUIRE(as<ex::Var>(l->body));
    CHECK(as<ex::Var>(l->body)->name == "y");
    CHECK(alpha_eq(out, mk::lam("z", mk::bool_t(), mk::var("y"))));
    CHECK_FALSE(alpha_eq(out, mk::lam("z", mk::bool_t(), mk::var("z"))));
}

TEST_CASE("substitution stops at shadowing binders") {
    auto e = expr_of("let x = x in x");
    auto out = subst(mk::tt(), "x", e);
    CHECK(alpha_eq(out, expr_of("let x = tt in x")));
    auto b = cmd_of("{x <- ret x; y <- ret x; ret y}");
    auto bo = subst(mk::ff(), "x", b);
    CHECK(alpha_eq(bo, cmd_of("{x <- ret ff; y <- ret x; ret y}")));
}

TEST_CASE("substitution inside blocks avoids capture") {
    auto b = cmd_of("{y <- meas a; ret <y, z>}");
    auto out = subst(mk::var("y"), "z", b);
    CHECK(alpha_eq(out, cmd_of("{w <- meas a; ret <w, y>}")));
    CHECK_FALSE(alpha_eq(out, cmd_of("{y <- meas a; ret <y, y>}")));
}

TEST_CASE("subst respects alpha equivalence") {
    auto t1 = cmd_of("bnd cmd meas a as u in ret <u, z>");
    auto t2 = cmd_of("bnd cmd meas a as v in ret <v, z>");
    REQUIRE(alpha_eq(t1, t2));
    for (const char* val : {"u", "v", "tt", "<u, v>"}) {
        auto e = expr_of(val);
        CHECK(alpha_eq(subst(e, "z", t1), subst(e, "z", t2)));
    }
}

TEST_CASE("alpha equivalence on variables and symbols") {
    CHECK(alpha_eq(cmd_of("new a in meas a"), cmd_of("new b in meas b")));
    CHECK_FALSE(alpha_eq(cmd_of("new a in meas b"), cmd_of("new b in meas b")));
    CHECK(alpha_eq(cmd_of("new a : qref[p] in ret (fun (x : qref[p]) tt)"),
                   cmd_of("new b : qref[r] in ret (fun (y : qref[r]) tt)")));
    CHECK_FALSE(alpha_eq(cmd_of("new a : qref[p] in ret (fun (x : qref[p]) tt)"),
                         cmd_of("new b : qref[r] in ret (fun (y : qref[s]) tt)")));
    SymbolTable st;
    auto free1 = parse_expr("fun (x : qref[q]) x", st);
    auto free2 = parse_expr("fun (y : qref[q]) y", st);
    CHECK(alpha_eq(free1, free2));
    auto other = parse_expr("fun (y : qref[q]) y", *std::make_unique<SymbolTable>());
    CHECK_FALSE(alpha_eq(free1, other));
}

TEST_CASE("free qubit symbols") {
    auto q = QubitSymbol::fresh("q");
    auto m = mk::gate_ap(mk::named(GateName::X), mk::qloc(q));
    CHECK(free_qubit_symbols(m) == SymbolSet{q});
    auto p = QubitSymbol::fresh("p");
    auto sc = mk::scope(p, mk::seq(mk::gate_ap(mk::named(GateName::H), mk::qloc(p)), m));
    CHECK(free_qubit_symbols(sc) == SymbolSet{q});
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_core("new a in\n  meas");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Syntax);
        CHECK(e.loc().line == 2);
    }
    try {
        parse_core("new a in FOO(a)");
        FAIL("expected unknown gate");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::UnknownGate);
        CHECK(e.loc().col == 10);
    }
    CHECK_THROWS_AS(parse_core("I3(a)"), ParseError);
    CHECK_THROWS_AS(parse_core("X(a) ret"), ParseError);
}

TEST_CASE("gate syntax") {
    auto g = parse_gate("prod(adj(S), tensor(H, diag(I2, X)))");
    CHECK(print(g) == "prod(adj(S), tensor(H, diag(I2, X)))");
    CHECK(print(parse_gate("CNOT")) == "diag(I2, X)");
    CHECK(print(parse_gate("I8")) == "I8");
}

TEST_CASE("print then parse round trips") {
    const char* sources[] = {
        "let f = fun (x : qref[a] * qref[b]) cmd {H(proj 1 x); D(I2, X)(proj 1 x; proj 2 x)} in f(<qloc[a], qloc[b]>)",
        "new a : qref[p] in {x <- meas a; y <- ret (if x then cmd X(a) else cmd ret ()); ret x}",
        "do call (proc (u : unit) {meas q})",
        "bnd (cmd ret tt) as z in ret <z, <>, <z>, ()>",
        "D(H, adj(T))(c; a, b)",
        "ret (fun (g : (bool -> bool) -> prod(bool) * prod()) g)((fun (b : bool) b))",
        "ret proj 2 (fun (x : bool) <x, x>)(tt)",
        "ret (proj 1 p)(x)",
        "scope s in {X(qloc[s]); meas qloc[s]}",
        "new x in new x in SWAP(x, x)",
    };
    for (const char* src : sources) {
        INFO(src);
        SymbolTable st;
        auto t = parse_core(src, st);
        auto text = print(t);
        INFO(text);
        auto back = parse_core(text, st);
        CHECK(alpha_eq(t, back));
        SymbolTable st2;
        auto uni = print(t, PrintOptions{true});
        CHECK(alpha_eq(t, parse_core(uni, st)));
    }
}

TEST_CASE("context header") {
    auto prog = parse_program("-- context: q r:s\nD(I2, X)(q; r)");
    REQUIRE(prog.context.size() == 2);
    CHECK(prog.context[0].var == "q");
    CHECK(prog.context[0].sym.name() == "q");
    CHECK(prog.context[1].var == "r");
    CHECK(prog.context[1].sym.name() == "s");
    auto text = print_program(prog.term, prog.context);
    CHECK(text.rfind("-- context: q r:s\n", 0) == 0);
}

TEST_CASE("is_value") {
    CHECK(is_value(expr_of("<tt, fun (x : bool) x, cmd meas a>")));
    CHECK_FALSE(is_value(expr_of("<tt, f(x)>")));
    CHECK_FALSE(is_value(expr_of("x")));
}

TEST_CASE("generated programs round trip through the printer") {
    gen::Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        gen::ProgramOptions opts;
        opts.context = {{"q", QubitSymbol::fresh("q")}, {"r", QubitSymbol::fresh("s")}};
        opts.identity_rate = 0.2;
        opts.fresh_meas_rate = 0.2;
        auto m = gen::random_program(rng, opts);
        bool unicode = trial % 2 == 1;
        auto text = print_program(m, opts.context, PrintOptions{unicode});
        INFO(text);
        auto prog = parse_program(text);
        REQUIRE(prog.context.size() == 2);
        auto again = print_program(prog.term, prog.context, PrintOptions{unicode});
        CHECK(again == text);
        // Closed parts compare up to renaming once the context symbols agree.
        CmdPtr back = std::get<CmdPtr>(prog.term);
        back = rename_symbol(back, prog.context[0].sym, opts.context[0].sym);
        back = rename_symbol(back, prog.context[1].sym, opts.context[1].sym);
        CHECK(alpha_eq(back, m));
    }
}
