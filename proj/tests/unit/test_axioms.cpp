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

#include "lqs/axioms/axioms.hpp"
#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/gen/generators.hpp"
#include "lqs/typecheck/typecheck.hpp"

using namespace lqs;

namespace {

CmdPtr cmd_of(const std::string& text) { return std::get<CmdPtr>(parse_core(text)); }

GatePtr g(const char* text) { return parse_gate(text); }

}  // namespace

TEST_CASE("axiom ids") {
    CHECK(all_axioms().size() == 11);
    CHECK(parse_axiom_id("b") == AxiomId::B);
    CHECK(parse_axiom_id("C") == std::nullopt);
    CHECK(parse_axiom_id("AB") == std::nullopt);
    for (auto id : all_axioms()) CHECK(parse_axiom_id(std::string(1, axiom_letter(id))) == id);
}

TEST_CASE("instantiate D") {
    auto inst = instantiate(AxiomId::D, {});
    CHECK(inst.context.empty());
    CHECK(alpha_eq(desugar(inst.lhs), desugar(cmd_of("do {new a in meas a}"))));
    CHECK(alpha_eq(desugar(inst.rhs), desugar(cmd_of("ret ff"))));
}

TEST_CASE("instantiate G") {
    AxiomParams p;
    p.n = 1;
    auto inst = instantiate(AxiomId::G, p);
    REQUIRE(inst.context.size() == 1);
    CHECK(alpha_eq(desugar(inst.lhs), desugar(cmd_of("do {I2(e)}"))));
    CHECK(check_axiom(AxiomId::G, p).passed);
}

TEST_CASE("instantiate B with H and X") {
    AxiomParams p;
    p.u = g("H");
    p.v = g("X");
    auto inst = instantiate(AxiomId::B, p);
    CHECK(inst.context.size() == 2);
    CHECK(alpha_eq(desugar(inst.lhs), desugar(cmd_of("{D(H, X)(a; b); meas a; ret <>}"))));
    auto r = check_axiom(AxiomId::B, p);
    CHECK(r.passed);
    CHECK(r.deviation < 1e-12);
}

TEST_CASE("dimension errors") {
    AxiomParams p;
    p.u = g("SWAP");
    p.v = g("X");
    CHECK_THROWS_AS(instantiate(AxiomId::B, p), AxiomError);
    p.u = nullptr;
    CHECK_THROWS_AS(instantiate(AxiomId::H, p), AxiomError);
}

TEST_CASE("fixed instances") {
    CHECK(check_axiom(AxiomId::A, {}).passed);
    CHECK(check_axiom(AxiomId::D, {}).passed);
    AxiomParams p;
    p.u = g("I2");
    p.v = g("I2");
    CHECK(check_axiom(AxiomId::H, p).passed);
    p.u = g("H");
    p.v = g("prod(T, H)");
    CHECK(check_axiom(AxiomId::E, p).passed);
    CHECK(check_axiom(AxiomId::H, p).passed);
    p.m = 2;
    p.u = g("SWAP");
    CHECK(check_axiom(AxiomId::I, p).passed);
}

TEST_CASE("a wrong equation is caught") {
    // E with the roles of U and V exchanged.
    AxiomParams p;
    p.u = g("H");
    p.v = g("X");
    auto inst = instantiate(AxiomId::E, p);
    auto wrong = cmd_of("{X(b); new a in ret <>}");
    auto r = equiv(inst.context, inst.lhs, wrong);
    CHECK_FALSE(r.equivalent);
}

TEST_CASE("every schema holds on random parameters") {
    for (auto id : all_axioms()) {
        auto res = check_axiom_suite(id, 12, 3);
        INFO(axiom_letter(id) << "\n" << res.first_failure);
        CHECK(res.passed == res.trials);
        CHECK(res.max_deviation <= 1e-9);
    }
}

TEST_CASE("both sides typecheck with the same type") {
    gen::Rng rng(61);
    for (auto id : all_axioms()) {
        for (int t = 0; t < 5; ++t) {
            auto inst = instantiate(id, random_params(id, rng));
            auto tl = check_program(inst.context, inst.lhs);
            auto tr = check_program(inst.context, inst.rhs);
            CHECK(types_equivalent(tl, tr));
        }
    }
}

TEST_CASE("simplify examples") {
    auto a = simplify(cmd_of("{do {I2(a)}; meas a}"));
    CHECK_FALSE(a.budget_exceeded);
    CHECK(alpha_eq(a.cmd, cmd_of("meas a")));
    CHECK(alpha_eq(simplify(cmd_of("do {new a in meas a}")).cmd, cmd_of("ret ff")));
    CHECK(alpha_eq(simplify(cmd_of("ret tt")).cmd, cmd_of("ret tt")));
    CHECK(alpha_eq(simplify(cmd_of("{H(a); H(a); meas a}")).cmd, cmd_of("meas a")));
    CHECK(alpha_eq(simplify(cmd_of("{H(a); S(a); meas a}")).cmd, cmd_of("bnd cmd prod(S, H)(a) as _ in meas a")));
    CHECK(alpha_eq(simplify(cmd_of("ret (fun (x : bool) if x then ff else tt)(tt)")).cmd, cmd_of("ret ff")));
    CHECK(alpha_eq(simplify(cmd_of("new a in {x <- meas a; H(a); ret x}")).cmd,
                   cmd_of("new a in bnd cmd H(a) as _ in ret ff")));
    CHECK(alpha_eq(simplify(cmd_of("new a in X(b)")).cmd, cmd_of("X(b)")));
    CHECK(alpha_eq(simplify(cmd_of("call (proc (u : unit) {meas b})")).cmd, cmd_of("meas b")));
}

TEST_CASE("simplify respects the budget") {
    SimplifyOptions o;
    o.budget = 1;
    auto m = cmd_of("{H(a); H(a); I2(a); meas a}");
    auto r = simplify(m, o);
    CHECK(r.budget_exceeded);
    CHECK(r.cmd == m);
}

TEST_CASE("simplify is sound and complete for injected redexes") {
    gen::Rng rng(62);
    for (int trial = 0; trial < 60; ++trial) {
        gen::ProgramOptions opts;
        opts.context = {{"q", QubitSymbol::fresh("q")}};
        opts.identity_rate = 0.3;
        opts.fresh_meas_rate = 0.4;
        auto m = gen::random_program(rng, opts);
        auto r = simplify(m);
        INFO(print_program(m, opts.context));
        INFO(print_program(r.cmd, opts.context));
        REQUIRE_FALSE(r.budget_exceeded);
        CHECK(gen::count_identity_gates(r.cmd) == 0);
        CHECK(gen::count_fresh_measurements(r.cmd) == 0);
        CHECK(types_equivalent(check_program(opts.context, m), check_program(opts.context, r.cmd)));
        CHECK(equiv(opts.context, m, r.cmd).equivalent);
    }
}
