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

#include <random>

#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/gen/generators.hpp"
#include "lqs/qsharp/frontend.hpp"
#include "lqs/typecheck/typecheck.hpp"
#include "teleport_harness.hpp"

using namespace lqs;
using namespace lqs::qs;
using gen::Rng;
using gen::random_gate;

namespace {

std::string data(const char* name) { return testing::read_file(std::string(LQS_TEST_DATA) + "/" + name); }

ErrorKind elab_error(const std::string& src) {
    try {
        elaborate_source(src);
    } catch (const QsError& e) {
        return e.kind();
    }
    FAIL("elaboration succeeded");
    return ErrorKind::Syntax;
}

TypeErrorKind type_error(const Elaboration& e) {
    try {
        check_program({}, Term{e.term});
    } catch (const TypeError& err) {
        return err.kind();
    }
    FAIL("typechecking succeeded");
    return TypeErrorKind::Mismatch;
}

Matrix h() { return named_matrix(GateName::H); }
Matrix x() { return named_matrix(GateName::X); }
Matrix id2() { return Matrix::Identity(2, 2); }

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

const char* kEntangle = R"(
operation Entangle (qAlice : Qubit, qBob : Qubit) : Unit is Adj {
    H(qAlice);
    CNOT(qAlice, qBob);
}
)";

}  // namespace

TEST_CASE("teleport program parses") {
    auto p = parse_qsharp(data("teleport.qs"));
    REQUIRE(p.callables.size() == 4);
    CHECK(p.namespaces == std::vector<std::string>{"Quantum.Kata.Teleportation"});
    CHECK(p.opens == std::vector<std::string>{"Microsoft.Quantum.Intrinsic"});
    CHECK(p.callables[0].name == "Entangle");
    CHECK(p.callables[0].adj);
    CHECK_FALSE(p.callables[0].ctl);
    CHECK(p.callables[2].params.items.size() == 2);
    CHECK(p.callables[2].params.items[1].is_tuple());
    CHECK(p.callables[3].body.size() == 3);
}

TEST_CASE("teleport elaborates to the golden term") {
    auto e = elaborate_source(data("teleport.qs"));
    REQUIRE(e.instances.size() == 4);
    CHECK(e.instances[0].var == "Entangle");
    CHECK(e.instances[3].var == "Teleport");
    CHECK(e.free_symbols.size() == 3);
    auto golden = parse_program(data("teleport.lqs"));
    CHECK(alpha_eq_modulo_symbols(desugar(Term{e.term}), desugar(golden.term)));
    auto t = check_program({}, Term{e.term});
    CHECK(alpha_eq(t, mk::prod({})));
}

TEST_CASE("printed elaboration reparses") {
    auto e = elaborate_source(data("teleport.qs"));
    auto text = print_program(Term{e.term}, {});
    auto back = parse_program(text);
    CHECK(alpha_eq_modulo_symbols(desugar(Term{e.term}), desugar(back.term)));
}

TEST_CASE("teleport moves the message state") {
    auto e = elaborate_source(data("teleport.qs"));
    Rng rng(11);
    for (int i = 0; i < 3; ++i) CHECK(testing::teleport_fidelity(e, random_gate(rng, 1, 3)) > 1 - 1e-9);
}

TEST_CASE("escaping and cloning programs are rejected") {
    CHECK(type_error(elaborate_source(data("escaping.qs"))) == TypeErrorKind::EscapingQubit);
    CHECK(type_error(elaborate_source(data("cloning.qs"))) == TypeErrorKind::AliasedQubits);
}

TEST_CASE("unsupported features") {
    CHECK(elab_error("operation F() : Unit { mutable x = true; }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F() : Unit { for i in 0..3 { } }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F(n : Int) : Unit { }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F(qs : Qubit[]) : Unit { }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F<'T>(x : 'T) : Unit { }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F() : Unit { use qs = Qubit[2]; }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F() : Unit { borrow q = Qubit(); }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F(q : Qubit) : Unit { within { H(q); } apply { X(q); } }") ==
          ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F(q : Qubit) : Unit { body (...) { H(q); } adjoint self; }") ==
          ErrorKind::UnsupportedFeature);
    CHECK(elab_error("function F(a : Bool, b : Bool) : Bool { return a == b; }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("operation F(q : Qubit) : Unit { F(q); }") == ErrorKind::UnsupportedFeature);
    CHECK(elab_error("function F(q : Qubit) : Unit { H(q); }") == ErrorKind::UnsupportedFeature);
}

TEST_CASE("other elaboration errors") {
    CHECK(elab_error("operation F(q : Qubit) : Unit { Foo(q); }") == ErrorKind::UnknownCallable);
    CHECK(elab_error("operation F(q : Qubit) : Unit { H(r); }") == ErrorKind::UnknownVariable);
    CHECK(elab_error("operation F(q : Qubit) : Unit { CNOT(q); }") == ErrorKind::Unification);
    CHECK(elab_error("operation G(q : Qubit) : Unit { } operation F(b : Bool) : Unit { G(b); }") ==
          ErrorKind::Unification);
    CHECK(elab_error("operation F(q : Qubit) : Unit { H(q) }") == ErrorKind::Syntax);
}

TEST_CASE("mat of Entangle is CNOT after H on the first qubit") {
    auto p = parse_qsharp(kEntangle);
    Matrix expect = cnot() * kron(h(), id2());
    CHECK(frobenius_distance(mat(p, "Entangle").matrix(), expect) < 1e-12);
}

TEST_CASE("mat rejects measuring operations") {
    auto p = parse_qsharp(data("teleport.qs"));
    CHECK_THROWS_AS(mat(p, "SendMsg"), QsError);
    try {
        mat(p, "SendMsg");
    } catch (const QsError& e) {
        CHECK(e.kind() == ErrorKind::NonAdjointable);
    }
    CHECK(elab_error("operation F(q : Qubit) : Unit { use a = Qubit(); CNOT(q, a); } "
                     "operation G(q : Qubit) : Unit { Adjoint F(q); }") == ErrorKind::NonAdjointable);
    CHECK(elab_error("operation G(q : Qubit) : Unit { Adjoint M(q); }") == ErrorKind::NonAdjointable);
}

TEST_CASE("mat follows calls, argument order and static branches") {
    auto p = parse_qsharp(R"(
        operation A(x : Qubit, y : Qubit) : Unit { H(y); CNOT(y, x); }
        operation B(a : Qubit, b : Qubit, c : Qubit) : Unit { A(c, a); if true { X(b); } else { H(b); } }
    )");
    Matrix a = embed(cnot(), {1, 0}, 2) * embed(h(), {1}, 2);
    CHECK(frobenius_distance(mat(p, "A").matrix(), a) < 1e-12);
    Matrix b = embed(x(), {1}, 3) * embed(a, {2, 0}, 3);
    CHECK(frobenius_distance(mat(p, "B").matrix(), b) < 1e-12);
}

TEST_CASE("embed_gate agrees with dense embedding") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + rng() % 4;
        std::size_t k = 1 + rng() % std::min<std::size_t>(n, 3);
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[i] = i;
        std::shuffle(pos.begin(), pos.end(), rng);
        pos.resize(k);
        GatePtr g = random_gate(rng, k, 2);
        Matrix want = embed(mat_of_gate(g).matrix(), pos, n);
        CHECK(frobenius_distance(mat_of_gate(embed_gate(g, pos, n)).matrix(), want) < 1e-10);
    }
}

TEST_CASE("use block elaborates to an allocation") {
    auto e = elaborate_source("operation F() : Unit { use q = Qubit() { return (); } }");
    REQUIRE(e.instances.size() == 1);
    const auto* lam = as<ex::Lam>(e.instances[0].value);
    REQUIRE(lam);
    const auto* box = as<ex::Box>(lam->body);
    REQUIRE(box);
    const auto* n = as<cm::New>(box->cmd);
    REQUIRE(n);
    CHECK(n->binder == "q");
    const auto* r = as<cm::Ret>(n->body);
    REQUIRE(r);
    CHECK(as<ex::Unit>(r->value));
}

namespace {

// Denotation of `call Op(<context qubits>)` for an elaborated root operation.
Instrument run_root(const Elaboration& e, const std::string& name) {
    const Instance* inst = e.root(name);
    REQUIRE(inst);
    QubitContext ctx;
    std::vector<ExprPtr> args;
    for (std::size_t i = 0; i < inst->symbols.size(); ++i) {
        ctx.push_back({"q" + std::to_string(i), inst->symbols[i]});
        args.push_back(mk::var(ctx.back().var));
    }
    ExprPtr arg = args.size() == 1 ? args.front() : mk::tuple(args);
    return denote(ctx, e.with_body(mk::call(mk::var(inst->var), arg)));
}

Instrument unitary_instrument(const Matrix& u) {
    Instrument inst;
    inst.free_qubits = static_cast<std::size_t>(std::log2(static_cast<double>(u.rows())));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(u.rows() * u.rows());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index a = 0; a < u.rows(); ++a) psi(i * u.rows() + a) = u(a, i);
    inst.branches["()"] = psi * psi.adjoint();
    return inst;
}

}  // namespace

TEST_CASE("functors") {
    std::string src = std::string(kEntangle) + R"(
        operation Round(a : Qubit, b : Qubit) : Unit { Entangle(a, b); Adjoint Entangle(a, b); }
        operation Ctl(c : Qubit, a : Qubit, b : Qubit) : Unit { Controlled Entangle([c], (a, b)); }
        operation Ctl2(c : Qubit, d : Qubit, t : Qubit) : Unit { Controlled X([c, d], t); }
        operation CtlAdj(c : Qubit, t : Qubit) : Unit { Controlled Adjoint S([c], t); }
    )";
    auto e = elaborate_source(src);
    CHECK(equiv(run_root(e, "Round"), unitary_instrument(Matrix::Identity(4, 4))).equivalent);

    Matrix ent = cnot() * kron(h(), id2());
    Matrix ctl = Matrix::Identity(8, 8);
    ctl.bottomRightCorner(4, 4) = ent;
    CHECK(equiv(run_root(e, "Ctl"), unitary_instrument(ctl)).equivalent);

    Matrix toffoli = Matrix::Identity(8, 8);
    toffoli.bottomRightCorner(2, 2) = x();
    CHECK(equiv(run_root(e, "Ctl2"), unitary_instrument(toffoli)).equivalent);

    Matrix cs = Matrix::Identity(4, 4);
    cs(3, 3) = cplx(0, -1);
    CHECK(equiv(run_root(e, "CtlAdj"), unitary_instrument(cs)).equivalent);
}

TEST_CASE("controlled operation keeps its relative phase") {
    auto e = elaborate_source(R"(
        operation P(q : Qubit) : Unit { S(q); S(q); X(q); S(q); S(q); X(q); }
        operation C(c : Qubit, q : Qubit) : Unit { Controlled P([c], q); }
    )");
    // P = Z X Z X = -I, so controlling it gives diag(1, 1, -1, -1).
    Matrix want = Matrix::Identity(4, 4);
    want(2, 2) = want(3, 3) = -1.0;
    CHECK(equiv(run_root(e, "C"), unitary_instrument(want)).equivalent);
}

TEST_CASE("measurement comparisons and classical control") {
    auto e = elaborate_source(R"(
        function Flip(b : Bool) : Bool { return not b; }
        operation F(q : Qubit) : Bool {
            H(q);
            if M(q) == Zero { return Flip(false); }
            let r = M(q);
            return r and true;
        }
    )");
    check_program({}, Term{e.term});
    auto inst = run_root(e, "F");
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    CHECK(inst.probability("tt", rho) == doctest::Approx(1.0));
}

TEST_CASE("reset and nested use") {
    auto e = elaborate_source(R"(
        operation F(q : Qubit) : Result {
            use (a, b) = (Qubit(), Qubit());
            X(q);
            CNOT(q, a);
            Reset(q);
            return M(a);
        }
    )");
    check_program({}, Term{e.term});
    auto inst = run_root(e, "F");
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    CHECK(inst.probability("tt", rho) == doctest::Approx(1.0));
    CHECK(inst.apply("tt", rho)(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("call sites with different qubits get separate instances") {
    auto e = elaborate_source(R"(
        operation G(q : Qubit) : Unit { H(q); }
        operation F(a : Qubit, b : Qubit) : Unit { G(a); G(b); G(a); }
    )");
    REQUIRE(e.instances.size() == 3);
    CHECK(e.instances[0].var == "G");
    CHECK(e.instances[1].var == "G_2");
    check_program({}, Term{e.term});
}

TEST_CASE("names are sanitized") {
    auto e = elaborate_source("operation ret(cmd : Qubit, X : Qubit) : Unit { CNOT(cmd, X); }");
    auto text = print_program(Term{e.term}, {});
    CHECK(text.find("ret'") != std::string::npos);
    auto back = parse_program(text);
    CHECK(alpha_eq_modulo_symbols(desugar(Term{e.term}), desugar(back.term)));
}
