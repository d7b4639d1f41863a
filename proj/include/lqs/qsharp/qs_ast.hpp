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

// Syntax tree for the supported Q# subset.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lqs/core/ast.hpp"

namespace lqs::qs {

enum class ErrorKind {
    Syntax,
    UnsupportedFeature,
    UnknownCallable,
    UnknownVariable,
    NonAdjointable,
    Unification,
};

const char* error_kind_name(ErrorKind k);

class QsError : public std::runtime_error {
public:
    QsError(ErrorKind kind, SourceLoc loc, const std::string& msg) : std::runtime_error(msg), kind_(kind), loc_(loc) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] SourceLoc loc() const noexcept { return loc_; }

private:
    ErrorKind kind_;
    SourceLoc loc_;
};

struct QsType {
    enum class Kind { Qubit, Bool, Result, Unit, Tuple, Function, Operation };
    Kind kind = Kind::Unit;
    std::vector<QsType> items;  // tuple items, or {domain, codomain}
    SourceLoc loc;
};

/// A name, or a tuple of patterns. Parameter patterns carry types.
struct QsPattern {
    std::string name;  // empty for tuples
    std::vector<QsPattern> items;
    std::optional<QsType> type;
    SourceLoc loc;

    [[nodiscard]] bool is_tuple() const { return name.empty(); }
};

struct QsExpr;
using QsExprPtr = std::shared_ptr<const QsExpr>;

struct QsExpr {
    enum class Kind {
        Var,         // name
        Bool,        // value
        Result,      // value: One = true
        Unit,
        Tuple,       // args
        Call,        // args[0] applied to args[1..]
        Adjoint,     // args[0]
        Controlled,  // args[0]
        Array,       // args; only as a control list
        Eq,          // args[0] == args[1]
        Neq,
        Not,
        And,
        Or,
        Cond,        // args[0] ? args[1] | args[2]
        QubitAlloc,  // Qubit()
    };
    Kind kind = Kind::Unit;
    std::string name;
    bool value = false;
    std::vector<QsExprPtr> args;
    SourceLoc loc;
};

struct QsStmt {
    enum class Kind { Let, Use, UseBlock, If, Return, Expr };
    Kind kind = Kind::Expr;
    QsPattern pattern;
    QsExprPtr expr;  // bound value, returned value, statement expression, or condition
    std::vector<QsStmt> body;       // use-block body, then-branch
    std::vector<QsStmt> else_body;  // `elif` chains are nested here
    bool has_else = false;
    SourceLoc loc;
};

struct QsCallable {
    bool is_operation = true;
    std::string name;
    QsPattern params;  // always a tuple pattern
    QsType result;
    bool adj = false;
    bool ctl = false;
    std::vector<QsStmt> body;
    SourceLoc loc;
};

struct QsProgram {
    std::vector<std::string> namespaces;
    std::vector<std::string> opens;
    std::vector<QsCallable> callables;
    std::string entry_point;  // callable marked @EntryPoint(), if any

    [[nodiscard]] const QsCallable* find(std::string_view name) const;
};

QsProgram parse_qsharp(std::string_view source);

}  // namespace lqs::qs
