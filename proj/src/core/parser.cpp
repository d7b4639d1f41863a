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

#include "lqs/core/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace lqs {

QubitSymbol SymbolTable::resolve(const std::string& name) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
        if (it->first == name) return it->second;
    return declare_free(name);
}

QubitSymbol SymbolTable::declare_free(const std::string& name) {
    auto it = free_.find(name);
    if (it != free_.end()) return it->second;
    return free_.emplace(name, QubitSymbol::fresh(name)).first->second;
}

void SymbolTable::push_bound(const std::string& name, QubitSymbol sym) { bound_.emplace_back(name, std::move(sym)); }
void SymbolTable::pop_bound() { bound_.pop_back(); }

namespace {

constexpr std::array kReserved = {"ret",  "bnd",  "as",   "in",   "new", "do",   "meas",  "let",
                                  "fun",  "cmd",  "proj", "tt",   "ff",  "if",   "then",  "else",
                                  "proc", "call", "gate", "qloc", "scope"};

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourceLoc loc{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", loc});
                return out;
            }
            unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (std::isalpha(c) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size()) {
                    unsigned char d = static_cast<unsigned char>(src_[pos_]);
                    if (!std::isalnum(d) && d != '_' && d != '\'') break;
                    advance(1);
                }
                out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), loc});
                continue;
            }
            if (std::isdigit(c)) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(1);
                out.push_back({Tok::Number, std::string(src_.substr(start, pos_ - start)), loc});
                continue;
            }
            if (auto p = unicode_punct()) {
                out.push_back({Tok::Punct, p, loc});
                continue;
            }
            static constexpr std::array two = {"<-", "->", "=>"};
            bool matched = false;
            for (const char* t : two) {
                if (src_.substr(pos_, 2) == t) {
                    advance(2);
                    out.push_back({Tok::Punct, t, loc});
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string_view("<>(){}[],;:=*").find(static_cast<char>(c)) != std::string_view::npos) {
                advance(1);
                out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), loc});
                continue;
            }
            throw ParseError(ParseError::Kind::Syntax, loc, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
        }
    }

private:
    const char* unicode_punct() {
        static constexpr std::array<std::pair<std::string_view, const char*>, 6> table = {{
            {"⟨", "<"},
            {"⟩", ">"},
            {"←", "<-"},
            {"→", "->"},
            {"⇒", "=>"},
            {"×", "*"},
        }};
        for (const auto& [glyph, ascii] : table) {
            if (src_.substr(pos_, glyph.size()) == glyph) {
                pos_ += glyph.size();
                ++col_;
                return ascii;
            }
        }
        return nullptr;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else if (src_.substr(pos_, 2) == "--") {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    void advance(std::size_t n) {
        pos_ += n;
        col_ += static_cast<int>(n);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class Parser {
public:
    Parser(std::vector<Token> toks, SymbolTable& syms) : toks_(std::move(toks)), syms_(syms) {}

    Term term() {
        Term t = starts_command() ? Term(cmd()) : Term(expr());
        expect_end();
        return t;
    }

    ExprPtr whole_expr() {
        auto e = expr();
        expect_end();
        return e;
    }
    CmdPtr whole_cmd() {
        auto m = cmd();
        expect_end();
        return m;
    }
    TypePtr whole_type() {
        auto t = type();
        expect_end();
        return t;
    }
    GatePtr whole_gate() {
        auto g = gate();
        expect_end();
        return g;
    }

private:
    // ------------------------------------------------------------ commands

    bool starts_command() const {
        const Token& t = peek();
        if (t.kind == Tok::Punct) return t.text == "{";
        if (t.kind != Tok::Ident) return false;
        static constexpr std::array words = {"ret", "bnd", "new", "do", "meas", "call", "scope"};
        if (std::find(words.begin(), words.end(), t.text) != words.end()) return true;
        return (is_gate_word(t.text) || t.text == "D") && peek(1).text == "(";
    }

    CmdPtr cmd() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        if (is_punct("{")) return block_or_single(loc);
        if (t.kind != Tok::Ident) fail(t, "expected a command");
        if (t.text == "ret") {
            next();
            return mk::ret(expr(), loc);
        }
        if (t.text == "bnd") {
            next();
            auto e = expr();
            expect_word("as");
            auto x = binder();
            expect_word("in");
            return mk::bnd(e, x, cmd(), loc);
        }
        if (t.text == "new") {
            next();
            auto x = binder();
            std::optional<QubitSymbol> sym;
            std::string sym_name;
            if (accept(":")) {
                expect_word("qref");
                expect("[");
                sym_name = ident();
                expect("]");
                sym = QubitSymbol::fresh(sym_name);
            }
            expect_word("in");
            if (sym) syms_.push_bound(sym_name, *sym);
            auto body = cmd();
            if (sym) syms_.pop_bound();
            return mk::new_(x, body, sym, loc);
        }
        if (t.text == "scope") {
            next();
            auto name = ident();
            expect_word("in");
            auto sym = QubitSymbol::fresh(name);
            syms_.push_bound(name, sym);
            auto body = cmd();
            syms_.pop_bound();
            return mk::scope(sym, body, loc);
        }
        if (t.text == "do") {
            next();
            return mk::do_(cmd(), loc);
        }
        if (t.text == "meas") {
            next();
            return mk::meas(expr(), loc);
        }
        if (t.text == "call") {
            next();
            auto fn = atom();
            ExprPtr arg;
            if (is_punct("(")) arg = arg_list();
            return mk::call(fn, arg, loc);
        }
        if (t.text == "D" && peek(1).text == "(") {
            next();
            expect("(");
            auto u = gate();
            expect(",");
            auto v = gate();
            expect(")");
            expect("(");
            auto c = expr();
            expect(";");
            auto targets = exps(")");
            expect(")");
            return mk::diag_ap(u, v, c, targets, loc);
        }
        if (peek(1).text == "(") {
            auto g = gate();
            return mk::gate_ap(g, arg_list(), loc);
        }
        fail(t, "expected a command");
    }

    CmdPtr block_or_single(SourceLoc loc) {
        expect("{");
        std::vector<cm::BlockItem> items;
        for (;;) {
            std::optional<std::string> x;
            if (peek().kind == Tok::Ident && peek(1).text == "<-") {
                x = binder();
                expect("<-");
            }
            auto m = cmd();
            if (accept(";")) {
                items.push_back({x, m});
                continue;
            }
            if (x) fail(peek(), "a block must end with a command");
            expect("}");
            if (items.empty()) return mk::block({}, m, loc);
            return mk::block(std::move(items), m, loc);
        }
    }

    // ------------------------------------------------------------ expressions

    ExprPtr expr() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        if (t.kind == Tok::Ident) {
            if (t.text == "let") {
                next();
                auto x = binder();
                expect("=");
                auto bound = expr();
                expect_word("in");
                return mk::let(bound, x, expr(), loc);
            }
            if (t.text == "fun") {
                next();
                expect("(");
                auto x = binder();
                expect(":");
                auto ty = type();
                expect(")");
                return mk::lam(x, ty, expr(), loc);
            }
            if (t.text == "cmd") {
                next();
                return mk::box(cmd(), loc);
            }
            if (t.text == "if") {
                next();
                auto c = expr();
                expect_word("then");
                auto a = expr();
                expect_word("else");
                return mk::if_(c, a, expr(), loc);
            }
        }
        return prefix();
    }

    ExprPtr prefix() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "proj") {
            SourceLoc loc = t.loc;
            next();
            const Token& n = peek();
            if (n.kind != Tok::Number) fail(n, "expected a projection index");
            std::size_t idx = std::stoul(n.text);
            if (idx == 0) fail(n, "projection indices start at 1");
            next();
            return mk::proj(idx, prefix(), loc);
        }
        return postfix();
    }

    ExprPtr postfix() {
        auto e = atom();
        while (is_punct("(")) {
            SourceLoc loc = peek().loc;
            e = mk::app(e, arg_list(), loc);
        }
        return e;
    }

    ExprPtr atom() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        if (t.kind == Tok::Punct) {
            if (t.text == "(") {
                next();
                if (accept(")")) return mk::unit(loc);
                auto e = expr();
                expect(")");
                return e;
            }
            if (t.text == "<") {
                next();
                std::vector<ExprPtr> items;
                if (!is_punct(">")) {
                    items.push_back(expr());
                    while (accept(",")) items.push_back(expr());
                }
                expect(">");
                return mk::tuple(std::move(items), loc);
            }
            fail(t, "expected an expression");
        }
        if (t.kind != Tok::Ident) fail(t, "expected an expression");
        if (t.text == "tt" || t.text == "ff") {
            next();
            return mk::boolean(t.text == "tt", loc);
        }
        if (t.text == "qloc") {
            next();
            expect("[");
            auto sym = syms_.resolve(ident());
            expect("]");
            return mk::qloc(sym, loc);
        }
        if (t.text == "gate") {
            next();
            return mk::gate_const(gate(), loc);
        }
        if (t.text == "proc") {
            next();
            expect("(");
            auto x = binder();
            expect(":");
            auto ty = type();
            expect(")");
            auto body = block_or_single(peek().loc);
            const auto* b = as<cm::Block>(body);
            if (b && b->items.empty()) body = b->last;
            return mk::proc(x, ty, body, loc);
        }
        if (is_reserved_word(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        next();
        return mk::var(t.text, loc);
    }

    ExprPtr arg_list() {
        expect("(");
        auto e = exps(")");
        expect(")");
        return e;
    }

    // Comma-separated list; a single item stands for itself.
    ExprPtr exps(const char* close) {
        SourceLoc loc = peek().loc;
        std::vector<ExprPtr> items;
        if (!is_punct(close)) {
            items.push_back(expr());
            while (accept(",")) items.push_back(expr());
        }
        if (items.size() == 1) return items[0];
        return mk::tuple(std::move(items), loc);
    }

    // ------------------------------------------------------------ types

    TypePtr type() {
        auto lhs = product_type();
        if (accept("->")) return mk::arrow(lhs, type());
        if (accept("=>")) return mk::proc_t(lhs, type());
        return lhs;
    }

    TypePtr product_type() {
        std::vector<TypePtr> items{atom_type()};
        while (accept("*")) items.push_back(atom_type());
        if (items.size() == 1) return items[0];
        return mk::prod(std::move(items));
    }

    TypePtr atom_type() {
        const Token& t = peek();
        if (accept("(")) {
            auto ty = type();
            expect(")");
            return ty;
        }
        if (t.kind != Tok::Ident) fail(t, "expected a type");
        std::string w = t.text;
        next();
        if (w == "bool") return mk::bool_t();
        if (w == "unit") return mk::unit_t();
        if (w == "qref") {
            expect("[");
            auto sym = syms_.resolve(ident());
            expect("]");
            return mk::qref(sym);
        }
        if (w == "cmd") {
            expect("(");
            auto r = type();
            expect(")");
            return mk::cmd_t(r);
        }
        if (w == "prod") {
            expect("(");
            std::vector<TypePtr> items;
            if (!is_punct(")")) {
                items.push_back(type());
                while (accept(",")) items.push_back(type());
            }
            expect(")");
            return mk::prod(std::move(items));
        }
        fail(t, "unknown type '" + w + "'");
    }

    // ------------------------------------------------------------ gates

    static bool is_gate_word(const std::string& w) {
        static constexpr std::array names = {"X", "Y", "Z", "H", "S", "T", "SWAP", "CNOT", "I",
                                             "adj", "prod", "tensor", "diag"};
        if (std::find(names.begin(), names.end(), w) != names.end()) return true;
        return w.size() > 1 && w[0] == 'I' &&
               std::all_of(w.begin() + 1, w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    }

    GatePtr gate() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected a gate");
        std::string w = t.text;
        if (w == "adj" || w == "prod" || w == "tensor" || w == "diag") {
            next();
            expect("(");
            auto a = gate();
            if (w == "adj") {
                expect(")");
                return mk::adjoint(a);
            }
            expect(",");
            auto b = gate();
            expect(")");
            if (w == "prod") return mk::product(a, b);
            if (w == "tensor") return mk::tensor(a, b);
            return mk::diag(a, b);
        }
        static const std::array<std::pair<const char*, GateName>, 7> named = {{{"X", GateName::X},
                                                                               {"Y", GateName::Y},
                                                                               {"Z", GateName::Z},
                                                                               {"H", GateName::H},
                                                                               {"S", GateName::S},
                                                                               {"T", GateName::T},
                                                                               {"SWAP", GateName::Swap}}};
        for (const auto& [text, name] : named) {
            if (w == text) {
                next();
                return mk::named(name);
            }
        }
        if (w == "CNOT") {
            next();
            return mk::diag(mk::identity(2), mk::named(GateName::X));
        }
        if (w == "I") {
            next();
            return mk::identity(2);
        }
        if (is_gate_word(w)) {
            std::size_t dim = 0;
            try {
                dim = std::stoull(w.substr(1));
            } catch (const std::exception&) {
                dim = 0;
            }
            if (!is_power_of_two(dim)) fail(t, "identity dimension must be a power of two: " + w);
            next();
            return mk::identity(dim);
        }
        throw ParseError(ParseError::Kind::UnknownGate, t.loc, "unknown gate '" + w + "'");
    }

    // ------------------------------------------------------------ tokens

    std::string binder() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected a variable name");
        if (is_reserved_word(t.text)) fail(t, "'" + t.text + "' is a keyword");
        next();
        return t.text;
    }

    std::string ident() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected an identifier");
        next();
        return t.text;
    }

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    void next() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }
    bool is_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool accept(const char* p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    void expect(const char* p) {
        if (!accept(p)) fail(peek(), std::string("expected '") + p + "'");
    }
    void expect_word(const char* w) {
        if (peek().kind != Tok::Ident || peek().text != w) fail(peek(), std::string("expected '") + w + "'");
        next();
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail(peek(), "unexpected trailing input");
    }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(ParseError::Kind::Syntax, t.loc, msg + ", found " + found);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    SymbolTable& syms_;
};

QubitContext parse_context_header(std::string_view text, SymbolTable& symbols) {
    QubitContext ctx;
    constexpr std::string_view tag = "-- context:";
    std::size_t start = 0;
    int line = 1;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view l = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        std::size_t lead = l.find_first_not_of(" \t\r");
        if (lead != std::string_view::npos && l.substr(lead, tag.size()) == tag) {
            std::string rest(l.substr(lead + tag.size()));
            std::size_t p = 0;
            while (p < rest.size()) {
                while (p < rest.size() && std::isspace(static_cast<unsigned char>(rest[p]))) ++p;
                std::size_t q = p;
                while (q < rest.size() && !std::isspace(static_cast<unsigned char>(rest[q]))) ++q;
                if (q == p) break;
                std::string item = rest.substr(p, q - p);
                std::string var = item;
                std::string sym = item;
                if (auto colon = item.find(':'); colon != std::string::npos) {
                    var = item.substr(0, colon);
                    sym = item.substr(colon + 1);
                }
                if (var.empty() || sym.empty())
                    throw ParseError(ParseError::Kind::Syntax, {line, static_cast<int>(p + 1)},
                                     "malformed context item '" + item + "'");
                ctx.push_back({var, symbols.declare_free(sym)});
                p = q;
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
        ++line;
    }
    return ctx;
}

}  // namespace

bool is_reserved_word(std::string_view word) {
    return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

ParsedProgram parse_program(std::string_view text, SymbolTable& symbols) {
    auto ctx = parse_context_header(text, symbols);
    Parser p(Lexer(text).run(), symbols);
    return ParsedProgram{p.term(), std::move(ctx)};
}

ParsedProgram parse_program(std::string_view text) {
    SymbolTable symbols;
    return parse_program(text, symbols);
}

Term parse_core(std::string_view text, SymbolTable& symbols) { return Parser(Lexer(text).run(), symbols).term(); }

Term parse_core(std::string_view text) {
    SymbolTable symbols;
    return parse_core(text, symbols);
}

ExprPtr parse_expr(std::string_view text, SymbolTable& symbols) {
    return Parser(Lexer(text).run(), symbols).whole_expr();
}
CmdPtr parse_cmd(std::string_view text, SymbolTable& symbols) { return Parser(Lexer(text).run(), symbols).whole_cmd(); }
TypePtr parse_type(std::string_view text, SymbolTable& symbols) {
    return Parser(Lexer(text).run(), symbols).whole_type();
}
GatePtr parse_gate(std::string_view text) {
    SymbolTable symbols;
    return Parser(Lexer(text).run(), symbols).whole_gate();
}

}  // namespace lqs
