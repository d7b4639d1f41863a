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

#include "lqs/core/printer.hpp"

#include <sstream>

namespace lqs {

const std::string& SymbolNamer::name(const QubitSymbol& s) {
    auto it = names_.find(s);
    if (it != names_.end()) return it->second;
    std::string base = s.name().empty() ? "q" : s.name();
    std::string candidate = base;
    for (int k = 2; taken_.count(candidate); ++k) candidate = base + "_" + std::to_string(k);
    taken_.emplace(candidate, s);
    return names_.emplace(s, candidate).first->second;
}

void SymbolNamer::reserve(const QubitSymbol& s, const std::string& name) {
    names_[s] = name;
    taken_[name] = s;
}

namespace {

// Expression precedence: open forms extend as far right as possible.
enum Level { kOpen = 0, kPrefix = 1, kPostfix = 2, kAtom = 3 };

class Printer {
public:
    Printer(SymbolNamer& names, const PrintOptions& opts) : names_(names), opts_(opts) {}

    std::string str() const { return out_.str(); }

    void type(const TypePtr& t, int ctx = 0) {
        // 0: arrows allowed, 1: products allowed, 2: atoms only
        std::visit(overloaded{
                       [&](const ty::QRef& n) { out_ << "qref[" << names_.name(n.sym) << "]"; },
                       [&](const ty::Arrow& n) { arrow_like(n.dom, n.cod, arrow_tok(), ctx); },
                       [&](const ty::Proc& n) { arrow_like(n.dom, n.cod, opts_.unicode ? " ⇒ " : " => ", ctx); },
                       [&](const ty::Cmd& n) {
                           out_ << "cmd(";
                           type(n.ret);
                           out_ << ")";
                       },
                       [&](const ty::Prod& n) {
                           if (n.items.size() < 2) {
                               out_ << "prod(";
                               if (!n.items.empty()) type(n.items[0]);
                               out_ << ")";
                               return;
                           }
                           if (ctx > 1) out_ << "(";
                           for (std::size_t i = 0; i < n.items.size(); ++i) {
                               if (i) out_ << (opts_.unicode ? " × " : " * ");
                               type(n.items[i], 2);
                           }
                           if (ctx > 1) out_ << ")";
                       },
                       [&](const ty::Bool&) { out_ << "bool"; },
                       [&](const ty::Unit&) { out_ << "unit"; },
                   },
                   t->node);
    }

    void gate(const GatePtr& g) {
        std::visit(overloaded{
                       [&](const gate::Named& n) {
                           out_ << gate_name_text(n.name);
                           if (n.name == GateName::I) out_ << n.dim;
                       },
                       [&](const gate::Adjoint& n) {
                           out_ << "adj(";
                           gate(n.inner);
                           out_ << ")";
                       },
                       [&](const gate::Product& n) { binary_gate("prod", n.outer, n.inner); },
                       [&](const gate::Tensor& n) { binary_gate("tensor", n.high, n.low); },
                       [&](const gate::Diag& n) { binary_gate("diag", n.zero, n.one); },
                   },
                   g->node);
    }

    void expr(const ExprPtr& e, int need = kOpen) {
        int own = level(e);
        bool paren = own < need;
        if (paren) out_ << "(";
        std::visit(overloaded{
                       [&](const ex::Var& n) { out_ << n.name; },
                       [&](const ex::Let& n) {
                           out_ << "let " << n.binder << " = ";
                           expr(n.bound);
                           out_ << " in";
                           out_ << (as<ex::Let>(n.body) ? "\n" : " ");
                           expr(n.body);
                       },
                       [&](const ex::Lam& n) {
                           out_ << "fun (" << n.binder << " : ";
                           type(n.annot);
                           out_ << ") ";
                           expr(n.body);
                       },
                       [&](const ex::App& n) {
                           expr(n.fn, kPostfix);
                           args(n.arg);
                       },
                       [&](const ex::Box& n) {
                           out_ << "cmd ";
                           cmd(n.cmd);
                       },
                       [&](const ex::Tuple& n) {
                           out_ << lt();
                           for (std::size_t i = 0; i < n.items.size(); ++i) {
                               if (i) out_ << ", ";
                               expr(n.items[i]);
                           }
                           out_ << gt();
                       },
                       [&](const ex::Proj& n) {
                           out_ << "proj " << n.index << " ";
                           expr(n.tuple, kPrefix);
                       },
                       [&](const ex::Bool& n) { out_ << (n.value ? "tt" : "ff"); },
                       [&](const ex::If& n) {
                           out_ << "if ";
                           expr(n.cond);
                           out_ << " then ";
                           expr(n.then_branch);
                           out_ << " else ";
                           expr(n.else_branch);
                       },
                       [&](const ex::Unit&) { out_ << "()"; },
                       [&](const ex::QLoc& n) { out_ << "qloc[" << names_.name(n.sym) << "]"; },
                       [&](const ex::GateConst& n) {
                           out_ << "gate ";
                           gate(n.gate);
                       },
                       [&](const ex::Proc& n) {
                           out_ << "proc (" << n.binder << " : ";
                           type(n.annot);
                           out_ << ") {";
                           cmd(n.body);
                           out_ << "}";
                       },
                   },
                   e->node);
        if (paren) out_ << ")";
    }

    void cmd(const CmdPtr& m) {
        std::visit(overloaded{
                       [&](const cm::Ret& n) {
                           out_ << "ret ";
                           expr(n.value);
                       },
                       [&](const cm::Bnd& n) {
                           out_ << "bnd ";
                           expr(n.boxed);
                           out_ << " as " << n.binder << " in ";
                           cmd(n.rest);
                       },
                       [&](const cm::New& n) {
                           out_ << "new " << n.binder;
                           if (n.sym) out_ << " : qref[" << names_.name(*n.sym) << "]";
                           out_ << " in ";
                           cmd(n.body);
                       },
                       [&](const cm::GateAp& n) {
                           gate(n.gate);
                           args(n.args);
                       },
                       [&](const cm::DiagAp& n) {
                           out_ << "D(";
                           gate(n.zero);
                           out_ << ", ";
                           gate(n.one);
                           out_ << ")(";
                           expr(n.control);
                           out_ << "; ";
                           exps(n.targets);
                           out_ << ")";
                       },
                       [&](const cm::Meas& n) {
                           out_ << "meas ";
                           expr(n.target);
                       },
                       [&](const cm::Scope& n) {
                           out_ << "scope " << names_.name(n.sym) << " in ";
                           cmd(n.body);
                       },
                       [&](const cm::Block& n) {
                           out_ << "{";
                           for (const auto& item : n.items) {
                               if (item.binder) out_ << *item.binder << (opts_.unicode ? " ← " : " <- ");
                               cmd(item.cmd);
                               out_ << "; ";
                           }
                           cmd(n.last);
                           out_ << "}";
                       },
                       [&](const cm::Do& n) {
                           out_ << "do ";
                           cmd(n.body);
                       },
                       [&](const cm::Call& n) {
                           out_ << "call ";
                           expr(n.fn, kAtom);
                           if (n.arg) args(n.arg);
                       },
                   },
                   m->node);
    }

private:
    static int level(const ExprPtr& e) {
        return std::visit(overloaded{
                              [](const ex::Let&) { return int(kOpen); },
                              [](const ex::Lam&) { return int(kOpen); },
                              [](const ex::Box&) { return int(kOpen); },
                              [](const ex::If&) { return int(kOpen); },
                              [](const ex::Proc&) { return int(kAtom); },
                              [](const ex::Proj&) { return int(kPrefix); },
                              [](const ex::App&) { return int(kPostfix); },
                              [](const auto&) { return int(kAtom); },
                          },
                          e->node);
    }

    // Argument list: a tuple of two or more items is spread, anything else is
    // a single argument.
    void args(const ExprPtr& a) {
        out_ << "(";
        exps(a);
        out_ << ")";
    }
    void exps(const ExprPtr& a) {
        const auto* t = as<ex::Tuple>(a);
        if (t && t->items.size() != 1) {
            for (std::size_t i = 0; i < t->items.size(); ++i) {
                if (i) out_ << ", ";
                expr(t->items[i]);
            }
            return;
        }
        expr(a);
    }

    void arrow_like(const TypePtr& dom, const TypePtr& cod, const char* tok, int ctx) {
        if (ctx > 0) out_ << "(";
        type(dom, 1);
        out_ << tok;
        type(cod, 0);
        if (ctx > 0) out_ << ")";
    }

    void binary_gate(const char* name, const GatePtr& a, const GatePtr& b) {
        out_ << name << "(";
        gate(a);
        out_ << ", ";
        gate(b);
        out_ << ")";
    }

    const char* arrow_tok() const { return opts_.unicode ? " → " : " -> "; }
    const char* lt() const { return opts_.unicode ? "⟨" : "<"; }
    const char* gt() const { return opts_.unicode ? "⟩" : ">"; }

    SymbolNamer& names_;
    const PrintOptions& opts_;
    std::ostringstream out_;
};

}  // namespace

std::string print(const TypePtr& t, SymbolNamer& names, const PrintOptions& opts) {
    Printer p(names, opts);
    p.type(t);
    return p.str();
}
std::string print(const ExprPtr& e, SymbolNamer& names, const PrintOptions& opts) {
    Printer p(names, opts);
    p.expr(e);
    return p.str();
}
std::string print(const CmdPtr& m, SymbolNamer& names, const PrintOptions& opts) {
    Printer p(names, opts);
    p.cmd(m);
    return p.str();
}

std::string print(const TypePtr& t, const PrintOptions& opts) {
    SymbolNamer n;
    return print(t, n, opts);
}
std::string print(const GatePtr& g, const PrintOptions& opts) {
    SymbolNamer n;
    Printer p(n, opts);
    p.gate(g);
    return p.str();
}
std::string print(const ExprPtr& e, const PrintOptions& opts) {
    SymbolNamer n;
    return print(e, n, opts);
}
std::string print(const CmdPtr& m, const PrintOptions& opts) {
    SymbolNamer n;
    return print(m, n, opts);
}
std::string print(const Term& t, const PrintOptions& opts) {
    return std::visit([&](const auto& p) { return print(p, opts); }, t);
}

std::string print_program(const Term& t, const QubitContext& ctx, const PrintOptions& opts) {
    SymbolNamer names;
    std::string out;
    if (!ctx.empty()) {
        out = "-- context:";
        for (const auto& entry : ctx) {
            const std::string& sym = names.name(entry.sym);
            out += " " + entry.var;
            if (sym != entry.var) out += ":" + sym;
        }
        out += "\n";
    }
    out += std::visit([&](const auto& p) { return print(p, names, opts); }, t);
    out += "\n";
    return out;
}

}  // namespace lqs
