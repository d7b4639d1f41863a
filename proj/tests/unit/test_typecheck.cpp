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

#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/gen/generators.hpp"
#include "lqs/typecheck/typecheck.hpp"

using namespace lqs;

namespace {

TypeErrorKind error_of(const std::string& src) {
    auto prog = parse_program(src);
    try {
        check_program(prog.context, prog.term);
    } catch (const TypeError& e) {
        return e.kind();
    }
    FAIL("expected a type error for " << src);
    return TypeErrorKind::Mismatch;
}

std::string type_of(const std::string& src) {
    auto prog = parse_program(src);
    return print(check_program(prog.context, prog.term));
}

QubitContext context_of(std::initializer_list<const char*> names) {
    QubitContext ctx;
    for (const char* n : names) ctx.push_back({n, QubitSymbol::fresh(n)});
    return ctx;
}

}  // namespace

TEST_CASE("expression typing") {
    CHECK(type_of("fun (x : bool) x") == "bool -> bool");
    CHECK(type_of("-- context: q\nq") == "qref[q]");
    CHECK(type_of("<tt, ()>") == "bool * unit");
    CHECK(type_of("proj 2 <tt, (), ff>") == "unit");
    CHECK(type_of("let x = tt in if x then ff else x") == "bool");
    CHECK(type_of("-- context: a\ncmd meas a") == "cmd(bool)");
    CHECK(error_of("y") == TypeErrorKind::UnboundVar);
    CHECK(error_of("tt(ff)") == TypeErrorKind::NotAFunction);
    CHECK(error_of("proj 3 <tt, ff>") == TypeErrorKind::BadArity);
    CHECK(error_of("proj 2 tt") == TypeErrorKind::NotATuple);
    CHECK(error_of("if () then tt else ff") == TypeErrorKind::Mismatch);
    CHECK(error_of("if tt then tt else ()") == TypeErrorKind::Mismatch);
    CHECK(error_of("(fun (x : bool) x)(())") == TypeErrorKind::Mismatch);
}

TEST_CASE("qloc typing depends on the signature") {
    QubitSymbol q = QubitSymbol::fresh("q");
    auto t = infer_expr({}, Signature({q}), mk::qloc(q));
    CHECK(alpha_eq(t, mk::qref(q)));
    try {
        infer_expr({}, Signature(), mk::qloc(q));
        FAIL("expected UnknownSymbol");
    } catch (const TypeError& e) {
        CHECK(e.kind() == TypeErrorKind::UnknownSymbol);
    }
}

TEST_CASE("command typing") {
    CHECK(type_of("new a in meas a") == "bool");
    CHECK(type_of("-- context: q\nX(q)") == "unit");
    CHECK(type_of("-- context: q r\nD(I2, X)(q; r)") == "unit");
    CHECK(type_of("-- context: q r\n{SWAP(q, r); x <- meas q; ret <x, x>}") == "bool * bool");
    CHECK(type_of("-- context: a\ndo {X(a); meas a}") == "bool");
    CHECK(type_of("new a in new b in {H(a); CNOT(a, b); x <- meas a; y <- meas b; ret <x, y>}") == "bool * bool");
    CHECK(error_of("-- context: q\nSWAP(q, q)") == TypeErrorKind::AliasedQubits);
    CHECK(error_of("-- context: q\nD(I2, X)(q; q)") == TypeErrorKind::AliasedQubits);
    CHECK(error_of("-- context: q\nSWAP(q)") == TypeErrorKind::DimensionMismatch);
    CHECK(error_of("-- context: q r\nD(I2, X)(q; <q, r>)") == TypeErrorKind::DimensionMismatch);
    CHECK(error_of("-- context: q r\nD(I2, SWAP)(q; r)") == TypeErrorKind::DimensionMismatch);
    CHECK(error_of("-- context: q\nprod(X, SWAP)(q)") == TypeErrorKind::DimensionMismatch);
    CHECK(error_of("meas tt") == TypeErrorKind::Mismatch);
    CHECK(error_of("bnd tt as x in ret x") == TypeErrorKind::Mismatch);
}

TEST_CASE("singleton tuple equivalence") {
    CHECK(type_of("-- context: q\nX(<q>)") == "unit");
    CHECK(type_of("-- context: q\nmeas <q>") == "bool");
    CHECK(type_of("-- context: q\n(fun (x : prod(qref[q])) cmd meas x)(q)") == "cmd(bool)");
    CHECK(type_of("-- context: q\n(fun (x : qref[q]) cmd meas x)(<q>)") == "cmd(bool)");
    CHECK(type_of("proj 1 tt") == "bool");
}

TEST_CASE("escaping references are rejected") {
    CHECK(error_of("new x in ret x") == TypeErrorKind::EscapingQubit);
    CHECK(error_of("new x in ret <tt, x>") == TypeErrorKind::EscapingQubit);
    CHECK(error_of("new x in ret cmd meas x") == TypeErrorKind::EscapingQubit);
    CHECK(error_of("new x in ret (fun (u : unit) cmd X(x))") == TypeErrorKind::EscapingQubit);
    CHECK(error_of("new x in {y <- ret x; ret y}") == TypeErrorKind::EscapingQubit);
    // The bound reference is a runtime alias: the inner command clones q1.
    CHECK(error_of("new q1 in ret (let q2 = q1 in cmd D(I2, X)(q1; q2))") == TypeErrorKind::AliasedQubits);
    // Returning a closed function is fine.
    CHECK(type_of("new x in {X(x); ret (fun (b : bool) b)}") == "bool -> bool");
    CHECK(error_of("new x in {X(x); ret (fun (b : bool) cmd ret b)}") == TypeErrorKind::EscapingQubit);
}

TEST_CASE("check_distinct_refs") {
    QubitSymbol a = QubitSymbol::fresh("a");
    QubitSymbol b = QubitSymbol::fresh("b");
    CHECK_NOTHROW(check_distinct_refs({mk::qref(a), mk::qref(b)}));
    CHECK_THROWS_AS(check_distinct_refs({mk::qref(a), mk::qref(a)}), TypeError);
    CHECK_THROWS_AS(check_distinct_refs({mk::qref(a), mk::qref(b), mk::qref(a)}), TypeError);
}

TEST_CASE("type well-formedness") {
    QubitSymbol q = QubitSymbol::fresh("q");
    CHECK(type_wf(Signature({q}), mk::qref(q)));
    CHECK_FALSE(type_wf(Signature(), mk::qref(q)));
    CHECK(type_wf(Signature(), mk::arrow(mk::bool_t(), mk::cmd_t(mk::unit_t()))));
    CHECK_FALSE(type_wf(Signature(), mk::prod({mk::bool_t(), mk::cmd_t(mk::qref(q))})));
}

TEST_CASE("annotations may only mention symbols in scope") {
    QubitSymbol q = QubitSymbol::fresh("q");
    auto e = mk::lam("x", mk::qref(q), mk::box(mk::meas(mk::var("x"))));
    CHECK_THROWS_AS(infer_expr({}, Signature(), e), TypeError);
    CHECK_NOTHROW(infer_expr({}, Signature({q}), e));
}

TEST_CASE("random programs typecheck, uniquely and under weakening") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        gen::ProgramOptions opts;
        opts.context = context_of({"q", "r"});
        opts.shape = static_cast<gen::ResultShape>(trial % 3);
        auto m = gen::random_program(rng, opts);
        INFO(print_program(m, opts.context));
        TypePtr t1, t2;
        REQUIRE_NOTHROW(t1 = check_program(opts.context, m));
        REQUIRE_NOTHROW(t2 = check_program(opts.context, m));
        CHECK(alpha_eq(t1, t2));
        CHECK_FALSE(is_higher_order(t1));
        auto [gamma, sigma] = program_environment(opts.context, m);
        Signature wider = sigma.extended(QubitSymbol::fresh("w")).extended(QubitSymbol::fresh("v"));
        CHECK(alpha_eq(infer_cmd(gamma, wider, m), t1));
    }
}

TEST_CASE("no-cloning post-pass over typed programs") {
    gen::Rng rng(22);
    std::size_t sites = 0;
    for (int trial = 0; trial < 200; ++trial) {
        gen::ProgramOptions opts;
        opts.context = context_of({"q", "r", "s"});
        opts.max_qubits = 5;
        auto m = gen::random_program(rng, opts);
        for (const auto& site : gate_sites(opts.context, m)) {
            ++sites;
            for (std::size_t i = 0; i < site.refs.size(); ++i)
                for (std::size_t j = i + 1; j < site.refs.size(); ++j) CHECK(site.refs[i] != site.refs[j]);
        }
    }
    CHECK(sites > 500);
}

TEST_CASE("escaping programs are always rejected") {
    gen::Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        gen::ProgramOptions opts;
        opts.context = context_of({"q"});
        auto m = gen::random_escaping_program(rng, opts);
        INFO(print_program(m, opts.context));
        try {
            check_program(opts.context, m);
            FAIL("escaping program accepted");
        } catch (const TypeError& e) {
            CHECK(e.kind() == TypeErrorKind::EscapingQubit);
        }
    }
}
