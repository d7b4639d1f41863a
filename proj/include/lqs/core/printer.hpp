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
#include <string>
#include <vector>

#include "lqs/core/ast.hpp"

namespace lqs {

/// A free qubit variable `var : qref[sym]` declared by a program header.
struct ContextEntry {
    std::string var;
    QubitSymbol sym;
};
using QubitContext = std::vector<ContextEntry>;

/// Assigns each symbol a printed name, unique within one printer run.
/// Symbols keep their display name unless it is already taken.
class SymbolNamer {
public:
    const std::string& name(const QubitSymbol& s);
    void reserve(const QubitSymbol& s, const std::string& name);

private:
    std::map<QubitSymbol, std::string> names_;
    std::map<std::string, QubitSymbol> taken_;
};

struct PrintOptions {
    bool unicode = false;
};

std::string print(const TypePtr& t, const PrintOptions& opts = {});
std::string print(const GatePtr& g, const PrintOptions& opts = {});
std::string print(const ExprPtr& e, const PrintOptions& opts = {});
std::string print(const CmdPtr& m, const PrintOptions& opts = {});
std::string print(const Term& t, const PrintOptions& opts = {});

std::string print(const TypePtr& t, SymbolNamer& names, const PrintOptions& opts = {});
std::string print(const ExprPtr& e, SymbolNamer& names, const PrintOptions& opts = {});
std::string print(const CmdPtr& m, SymbolNamer& names, const PrintOptions& opts = {});

/// Full .lqs file text: a `-- context:` header when `ctx` is non-empty, then
/// the term on the following lines.
std::string print_program(const Term& t, const QubitContext& ctx, const PrintOptions& opts = {});

}  // namespace lqs
