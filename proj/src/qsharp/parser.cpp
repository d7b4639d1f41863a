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
#include <array>
#include <cctype>

#include "lqs/qsharp/qs_ast.hpp"

namespace lqs::qs {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
        case ErrorKind::UnknownCallable: return "UnknownCallable";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::NonAdjointable: return "NonAdjointable";
        case ErrorKind::Unification: return "Unification";
    }
    return "?";
}

const QsCallable* QsProgram::find(std::string_view name) const {
    for (const auto& c : callables)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (pos < src.size()) {
        char c = src[pos];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(pos, 2) == "//") {
            while (pos < src.size() && src[pos] != '\n') advance(1);
            continue;
        }
        if (src.substr(pos, 2) == "/*") {
            auto end = src.find("*/", pos + 2);
            advance(end == std::string_view::npos ? src.size() - pos : end + 2 - pos);
            continue;
        }
        SourceLoc loc{line, col};
        std::size_t start = pos;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) advance(1);
            out.push_back({Tok::Ident, std::string(src.substr(start, pos - start)), loc});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '.')) advance(1);
            out.push_back({Tok::Number, std::string(src.substr(start, pos - start)), loc});
            continue;
        }
        if (c == '"' || (c == '$' && pos + 1 < src.size() && src[pos + 1] == '"')) {
            advance(c == '$' ? 2 : 1);
            while (pos < src.size() && src[pos] != '"') advance(src[pos] == '\\' ? 2 : 1);
            advance(1);
            out.push_back({Tok::String, std::string(src.substr(start, pos - start)), loc});
            continue;
        }
        static constexpr std::array two = {"==", "!=", "->", "=>", "<=", ">=", "&&", "||", "w/", "::", ".."};
        std::string_view p2 = src.substr(pos, 2);
        if (std::find(two.begin(), two.end(), p2) != two.end()) {
            advance(2);
            out.push_back({Tok::Punct, std::string(p2), loc});
            continue;
        }
        advance(1);
        out.push_back({Tok::Punct, std::string(1, c), loc});
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    QsProgram program() {
        QsProgram p;
        items(p, false);
        if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
        return p;
    }

private:
    void items(QsProgram& p, bool in_namespace) {
        for (;;) {
            const Token& t = peek();
            if (t.kind == Tok::End) return;
            if (in_namespace && is_punct("}")) return;
            if (is_word("namespace")) {
                next();
                p.namespaces.push_back(qualified_name());
                expect("{");
                items(p, true);
                expect("}");
            } else if (is_word("open") || is_word("import")) {
                next();
                std::string name = qualified_name();
                if (accept(".")) expect("*");
                if (accept("as")) qualified_name();
                p.opens.push_back(name);
                expect(";");
            } else if (is_punct("@")) {
                next();
                bool entry = base(qualified_name()) == "EntryPoint";
                skip_balanced();
                pending_entry_ = pending_entry_ || entry;
            } else if (is_word("internal")) {
                next();
            } else if (is_word("operation") || is_word("function")) {
                p.callables.push_back(callable());
                if (pending_entry_) p.entry_point = p.callables.back().name;
                pending_entry_ = false;
            } else if (is_word("newtype") || is_word("struct")) {
                unsupported(t, "user-defined types");
            } else {
                fail(t, "expected a declaration");
            }
        }
    }

    QsCallable callable() {
        QsCallable c;
        c.loc = peek().loc;
        c.is_operation = next().text == "operation";
        c.name = ident();
        if (is_punct("<")) unsupported(peek(), "type parameters");
        c.params = param_tuple();
        expect(":");
        c.result = type();
        if (accept_word("is")) characteristics(c);
        c.body = block();
        return c;
    }

    void characteristics(QsCallable& c) {
        for (;;) {
            if (accept("(")) {
                characteristics(c);
                expect(")");
            } else {
                const Token& t = peek();
                std::string w = ident();
                if (w == "Adj") {
                    c.adj = true;
                } else if (w == "Ctl") {
                    c.ctl = true;
                } else {
                    fail(t, "unknown characteristic '" + w + "'");
                }
            }
            if (!accept("+") && !accept("*")) return;
        }
    }

    QsPattern param_tuple() {
        QsPattern p;
        p.loc = peek().loc;
        expect("(");
        if (!is_punct(")")) {
            do {
                p.items.push_back(param());
            } while (accept(","));
        }
        expect(")");
        return p;
    }

    QsPattern param() {
        if (is_punct("(")) return param_tuple();
        QsPattern p;
        p.loc = peek().loc;
        p.name = ident();
        expect(":");
        p.type = type();
        return p;
    }

    // ------------------------------------------------------------ types

    QsType type() {
        QsType dom = type_atom();
        if (is_punct("->") || is_punct("=>")) {
            bool op = next().text == "=>";
            QsType t;
            t.kind = op ? QsType::Kind::Operation : QsType::Kind::Function;
            t.loc = dom.loc;
            t.items.push_back(std::move(dom));
            t.items.push_back(type());
            if (op && accept_word("is")) {
                QsCallable scratch;
                characteristics(scratch);
            }
            return t;
        }
        return dom;
    }

    QsType type_atom() {
        const Token& tok = peek();
        QsType t;
        t.loc = tok.loc;
        if (accept("(")) {
            if (accept(")")) {
                t.kind = QsType::Kind::Unit;
            } else {
                t.items.push_back(type());
                while (accept(",")) t.items.push_back(type());
                expect(")");
                if (t.items.size() == 1) {
                    QsType inner = std::move(t.items.front());
                    t = std::move(inner);
                } else {
                    t.kind = QsType::Kind::Tuple;
                }
            }
        } else if (tok.kind == Tok::Punct && tok.text == "'") {
            unsupported(tok, "type parameters");
        } else {
            std::string w = ident();
            if (w == "Qubit") {
                t.kind = QsType::Kind::Qubit;
            } else if (w == "Bool") {
                t.kind = QsType::Kind::Bool;
            } else if (w == "Result") {
                t.kind = QsType::Kind::Result;
            } else if (w == "Unit") {
                t.kind = QsType::Kind::Unit;
            } else {
                unsupported(tok, "type '" + w + "'");
            }
        }
        if (is_punct("[")) unsupported(peek(), "arrays");
        return t;
    }

    // ------------------------------------------------------------ statements

    std::vector<QsStmt> block() {
        expect("{");
        std::vector<QsStmt> out;
        while (!is_punct("}")) out.push_back(stmt());
        expect("}");
        return out;
    }

    QsStmt stmt() {
        const Token& t = peek();
        QsStmt s;
        s.loc = t.loc;
        if (t.kind == Tok::Ident) {
            static constexpr std::array loops = {"for", "while", "repeat", "until", "fixup"};
            static constexpr std::array specs = {"body", "adjoint", "controlled"};
            if (std::find(loops.begin(), loops.end(), t.text) != loops.end()) unsupported(t, "loops");
            if (std::find(specs.begin(), specs.end(), t.text) != specs.end() && peek(1).kind != Tok::Punct)
                unsupported(t, "explicit specializations");
            if (std::find(specs.begin(), specs.end(), t.text) != specs.end() && peek(1).text == "(")
                unsupported(t, "explicit specializations");
            if (t.text == "mutable" || t.text == "set") unsupported(t, "mutable variables");
            if (t.text == "borrow" || t.text == "borrowing") unsupported(t, "borrowed qubits");
            if (t.text == "within" || t.text == "apply") unsupported(t, "conjugations");
            if (t.text == "fail") unsupported(t, "fail statements");
            if (t.text == "let") {
                next();
                s.kind = QsStmt::Kind::Let;
                s.pattern = pattern();
                expect("=");
                s.expr = expr();
                expect(";");
                return s;
            }
            if (t.text == "use" || t.text == "using") {
                bool paren = t.text == "using";
                next();
                if (paren) expect("(");
                s.pattern = pattern();
                expect("=");
                s.expr = expr();
                if (paren) expect(")");
                if (is_punct("{")) {
                    s.kind = QsStmt::Kind::UseBlock;
                    s.body = block();
                } else {
                    s.kind = QsStmt::Kind::Use;
                    expect(";");
                }
                return s;
            }
            if (t.text == "if") return if_stmt();
            if (t.text == "return") {
                next();
                s.kind = QsStmt::Kind::Return;
                if (is_punct(";")) {
                    s.expr = leaf(QsExpr::Kind::Unit, t.loc);
                } else {
                    s.expr = expr();
                }
                expect(";");
                return s;
            }
        }
        s.kind = QsStmt::Kind::Expr;
        s.expr = expr();
        expect(";");
        return s;
    }

    QsStmt if_stmt() {
        QsStmt s;
        s.loc = next().loc;
        s.kind = QsStmt::Kind::If;
        s.expr = expr();
        s.body = block();
        if (is_word("elif")) {
            s.has_else = true;
            s.else_body.push_back(if_stmt());
        } else if (accept_word("else")) {
            s.has_else = true;
            if (is_word("if")) {
                s.else_body.push_back(if_stmt());
            } else {
                s.else_body = block();
            }
        }
        return s;
    }

    QsPattern pattern() {
        QsPattern p;
        p.loc = peek().loc;
        if (accept("(")) {
            do {
                p.items.push_back(pattern());
            } while (accept(","));
            expect(")");
            if (p.items.size() == 1) {
                QsPattern inner = std::move(p.items.front());
                return inner;
            }
            return p;
        }
        p.name = ident();
        if (accept(":")) p.type = type();
        return p;
    }

    // ------------------------------------------------------------ expressions

    QsExprPtr expr() {
        auto c = or_expr();
        if (is_punct("?")) {
            SourceLoc loc = next().loc;
            auto a = or_expr();
            expect("|");
            auto b = expr();
            return node(QsExpr::Kind::Cond, loc, {c, a, b});
        }
        return c;
    }

    QsExprPtr or_expr() {
        auto l = and_expr();
        while (is_word("or") || is_punct("||")) {
            if (is_punct("||")) unsupported(peek(), "the '||' operator");
            SourceLoc loc = next().loc;
            l = node(QsExpr::Kind::Or, loc, {l, and_expr()});
        }
        return l;
    }

    QsExprPtr and_expr() {
        auto l = eq_expr();
        while (is_word("and") || is_punct("&&")) {
            if (is_punct("&&")) unsupported(peek(), "the '&&' operator");
            SourceLoc loc = next().loc;
            l = node(QsExpr::Kind::And, loc, {l, eq_expr()});
        }
        return l;
    }

    QsExprPtr eq_expr() {
        auto l = unary();
        if (is_punct("==") || is_punct("!=")) {
            auto k = peek().text == "==" ? QsExpr::Kind::Eq : QsExpr::Kind::Neq;
            SourceLoc loc = next().loc;
            l = node(k, loc, {l, unary()});
        }
        static constexpr std::array arith = {"+", "-", "*", "/", "%", "^", "<", ">", "<=", ">=", "w/", "..", "&", "|"};
        const Token& t = peek();
        if (t.kind == Tok::Punct && std::find(arith.begin(), arith.end(), t.text) != arith.end() && t.text != "|")
            unsupported(t, "operator '" + t.text + "'");
        return l;
    }

    QsExprPtr unary() {
        if (is_word("not") || is_punct("!")) {
            if (is_punct("!")) unsupported(peek(), "the '!' operator");
            SourceLoc loc = next().loc;
            return node(QsExpr::Kind::Not, loc, {unary()});
        }
        if (is_punct("-")) unsupported(peek(), "arithmetic");
        return postfix(primary());
    }

    QsExprPtr postfix(QsExprPtr e) {
        for (;;) {
            if (is_punct("(")) {
                SourceLoc loc = peek().loc;
                std::vector<QsExprPtr> parts{e};
                next();
                if (!is_punct(")")) {
                    do {
                        parts.push_back(expr());
                    } while (accept(","));
                }
                expect(")");
                e = node(QsExpr::Kind::Call, loc, std::move(parts));
            } else if (is_punct("[")) {
                unsupported(peek(), "arrays");
            } else if (is_punct("!") || is_punct("::")) {
                unsupported(peek(), "user-defined types");
            } else {
                return e;
            }
        }
    }

    QsExprPtr primary() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        if (t.kind == Tok::Number) unsupported(t, "numeric literals");
        if (t.kind == Tok::String) unsupported(t, "string literals");
        if (accept("(")) {
            if (accept(")")) return leaf(QsExpr::Kind::Unit, loc);
            std::vector<QsExprPtr> parts{expr()};
            while (accept(",")) parts.push_back(expr());
            expect(")");
            if (parts.size() == 1) return parts.front();
            return node(QsExpr::Kind::Tuple, loc, std::move(parts));
        }
        if (accept("[")) {
            std::vector<QsExprPtr> parts;
            if (!is_punct("]")) {
                do {
                    parts.push_back(expr());
                } while (accept(","));
            }
            expect("]");
            return node(QsExpr::Kind::Array, loc, std::move(parts));
        }
        if (t.kind != Tok::Ident) fail(t, "expected an expression");
        if (t.text == "Adjoint" || t.text == "Controlled") {
            auto k = t.text == "Adjoint" ? QsExpr::Kind::Adjoint : QsExpr::Kind::Controlled;
            next();
            return node(k, loc, {primary()});
        }
        if (t.text == "true" || t.text == "false") {
            auto e = std::make_shared<QsExpr>(QsExpr{QsExpr::Kind::Bool, "", next().text == "true", {}, loc});
            return e;
        }
        if (t.text == "One" || t.text == "Zero") {
            return std::make_shared<QsExpr>(QsExpr{QsExpr::Kind::Result, "", next().text == "One", {}, loc});
        }
        if (t.text == "Qubit") {
            next();
            if (is_punct("[")) unsupported(peek(), "qubit arrays");
            expect("(");
            expect(")");
            return leaf(QsExpr::Kind::QubitAlloc, loc);
        }
        auto e = std::make_shared<QsExpr>();
        e->kind = QsExpr::Kind::Var;
        e->name = qualified_name();
        e->loc = loc;
        return e;
    }

    // ------------------------------------------------------------ helpers

    static QsExprPtr leaf(QsExpr::Kind k, SourceLoc loc) {
        auto e = std::make_shared<QsExpr>();
        e->kind = k;
        e->loc = loc;
        return e;
    }

    static QsExprPtr node(QsExpr::Kind k, SourceLoc loc, std::vector<QsExprPtr> args) {
        auto e = std::make_shared<QsExpr>();
        e->kind = k;
        e->loc = loc;
        e->args = std::move(args);
        return e;
    }

    std::string qualified_name() {
        std::string name = ident();
        while (is_punct(".") && peek(1).kind == Tok::Ident) {
            next();
            name += "." + ident();
        }
        return name;
    }

    void skip_balanced() {
        if (!is_punct("(")) return;
        int depth = 0;
        do {
            if (peek().kind == Tok::End) fail(peek(), "unbalanced parentheses");
            if (is_punct("(")) ++depth;
            if (is_punct(")")) --depth;
            next();
        } while (depth > 0);
    }

    std::string ident() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected an identifier");
        next();
        return t.text;
    }

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
    bool accept(std::string_view p) {
        if (!is_punct(p) && !is_word(p)) return false;
        next();
        return true;
    }
    bool accept_word(std::string_view w) {
        if (!is_word(w)) return false;
        next();
        return true;
    }
    void expect(std::string_view p) {
        if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
        next();
    }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw QsError(ErrorKind::Syntax, t.loc, msg);
    }
    [[noreturn]] static void unsupported(const Token& t, const std::string& what) {
        throw QsError(ErrorKind::UnsupportedFeature, t.loc, "unsupported: " + what);
    }

    static std::string base(const std::string& name) {
        auto p = name.rfind('.');
        return p == std::string::npos ? name : name.substr(p + 1);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool pending_entry_ = false;
};

}  // namespace

QsProgram parse_qsharp(std::string_view source) { return Parser(source).program(); }

}  // namespace lqs::qs
