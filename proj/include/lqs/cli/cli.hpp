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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lqs/interp/store.hpp"

namespace lqs::cli {

enum class Format { Text, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // check or equivalence failed
inline constexpr int kExitUsage = 2;    // bad arguments, unreadable or unparsable input

struct CliConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::size_t shots = 1000;
    SimMode mode = SimMode::Density;
    double tol = 1e-9;
    Format format = Format::Text;
    std::size_t max_qubits = 10;
    std::size_t trials = 100;
    std::string entry;  // Q# callable to run; defaults to the entry point
};

/// LQS_MAX_QUBITS when set to a positive integer, otherwise 10.
std::size_t default_max_qubits();

int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses arguments (argv[0] is the program name) and executes.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lqs::cli
