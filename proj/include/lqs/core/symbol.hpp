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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace lqs {

/// Static name of a logical qubit. Identity is the id; the display name is
/// only used when printing.
class QubitSymbol {
public:
    QubitSymbol() = default;

    /// Issues a symbol with an id never handed out before in this process.
    static QubitSymbol fresh(std::string_view display_name);

    [[nodiscard]] std::uint64_t id() const noexcept { return id_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool valid() const noexcept { return id_ != 0; }

    friend bool operator==(const QubitSymbol& a, const QubitSymbol& b) noexcept { return a.id_ == b.id_; }
    friend std::strong_ordering operator<=>(const QubitSymbol& a, const QubitSymbol& b) noexcept {
        return a.id_ <=> b.id_;
    }

private:
    QubitSymbol(std::uint64_t id, std::string name) : id_(id), name_(std::move(name)) {}

    std::uint64_t id_ = 0;
    std::string name_;
};

struct QubitSymbolHash {
    std::size_t operator()(const QubitSymbol& s) const noexcept { return std::hash<std::uint64_t>{}(s.id()); }
};

/// Fresh term-variable name `base'N`, N drawn from a process-wide counter.
std::string fresh_var_name(std::string_view base);

}  // namespace lqs
