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

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/core/printer.hpp"

namespace lqs {

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownGate };
    ParseError(Kind kind, SourceLoc loc, const std::string& msg) : std::runtime_error(msg), kind_(kind), loc_(loc) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] SourceLoc loc() const noexcept { return loc_; }
    [[nodiscard]] const char* kind_name() const noexcept {
        return kind_ == Kind::UnknownGate ? "UnknownGate" : "SyntaxError";
    }

private:
    Kind kind_;
    SourceLoc loc_;
};

/// Maps symbol names in source text to QubitSymbols. Names not bound by an
/// enclosing `new x : qref[a]` are free and resolved through a global table,
/// creating the symbol on first use.
class SymbolTable {
public:
    QubitSymbol resolve(const std::string& name);
    QubitSymbol declare_free(const std::string& name);
    void push_bound(const std::string& name, QubitSymbol sym);
    void pop_bound();
    [[nodiscard]] const std::map<std::string, QubitSymbol>& free_symbols() const { return free_; }

private:
    std::vector<std::pair<std::string, QubitSymbol>> bound_;
    std::map<std::string, QubitSymbol> free_;
};

struct ParsedProgram {
    Term term;
    QubitContext context;
};

/// Parses a .lqs file: optional `-- context: q r ...` header line followed by
/// one expression or command. A context item `q` declares variable q of type
/// qref[q]; `q:a` declares q of type qref[a].
ParsedProgram parse_program(std::string_view text);
ParsedProgram parse_program(std::string_view text, SymbolTable& symbols);

Term parse_core(std::string_view text);
Term parse_core(std::string_view text, SymbolTable& symbols);
ExprPtr parse_expr(std::string_view text, SymbolTable& symbols);
CmdPtr parse_cmd(std::string_view text, SymbolTable& symbols);
TypePtr parse_type(std::string_view text, SymbolTable& symbols);
GatePtr parse_gate(std::string_view text);

/// Words that cannot be used as variable names.
bool is_reserved_word(std::string_view word);

}  // namespace lqs
