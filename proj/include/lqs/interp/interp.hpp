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
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "lqs/core/ast.hpp"
#include "lqs/interp/store.hpp"

namespace lqs {

struct StepResult {
    enum class Kind { Stepped, Final, Stuck };
    Kind kind;
    ExprPtr expr;        // Stepped expression, or the value when Final
    CmdPtr cmd;          // Stepped command
    std::string reason;  // Stuck

    static StepResult stepped(ExprPtr e) { return {Kind::Stepped, std::move(e), nullptr, {}}; }
    static StepResult stepped(CmdPtr m) { return {Kind::Stepped, nullptr, std::move(m), {}}; }
    static StepResult final(ExprPtr v) { return {Kind::Final, std::move(v), nullptr, {}}; }
    static StepResult stuck(std::string why) { return {Kind::Stuck, nullptr, nullptr, std::move(why)}; }
};

/// Chooses measurement outcomes and updates the store accordingly.
class Measurer {
public:
    virtual ~Measurer() = default;
    virtual bool measure(QuantumStore& store, const QubitSymbol& q) = 0;
};

/// Samples outcomes with the Born rule and renormalises.
class SamplingMeasurer final : public Measurer {
public:
    explicit SamplingMeasurer(std::uint64_t seed) : rng_(seed) {}
    bool measure(QuantumStore& store, const QubitSymbol& q) override;

private:
    std::mt19937_64 rng_;
};

/// Always reports `outcome`; projects without renormalising.
class ForcedMeasurer final : public Measurer {
public:
    explicit ForcedMeasurer(bool outcome, bool renormalize = false) : outcome_(outcome), renormalize_(renormalize) {}
    bool measure(QuantumStore& store, const QubitSymbol& q) override;

private:
    bool outcome_;
    bool renormalize_;
};

/// Records that a measurement was requested and leaves the store alone. The
/// step that consulted it must be discarded.
class ProbeMeasurer final : public Measurer {
public:
    bool measure(QuantumStore& store, const QubitSymbol& q) override;
    [[nodiscard]] bool requested() const { return requested_; }
    [[nodiscard]] const QubitSymbol& qubit() const { return qubit_; }
    void reset() { requested_ = false; }

private:
    bool requested_ = false;
    QubitSymbol qubit_;
};

/// Gate matrices memoised by node identity for one execution.
class GateCache {
public:
    const Matrix& get(const GatePtr& g);

private:
    std::unordered_map<const Gate*, std::pair<GatePtr, Matrix>> cache_;
};

StepResult step_expr(const ExprPtr& e);
StepResult step_cmd(QuantumStore& store, const CmdPtr& m, Measurer& measurer, GateCache* cache = nullptr);

class InterpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExecOptions {
    std::size_t step_limit = 1'000'000;
    /// Called with each intermediate command, before it is stepped.
    std::function<void(const CmdPtr&, const QuantumStore&)> observer;
};

struct Execution {
    ExprPtr value;
    std::vector<bool> transcript;  // measurement outcomes in order
    std::size_t steps = 0;
};

/// Steps `m` to a final value. Throws InterpError on Stuck or step limit.
Execution execute(const CmdPtr& m, QuantumStore& store, Measurer& measurer, const ExecOptions& opts = {});

/// Reduces a pure expression to a value.
ExprPtr evaluate(const ExprPtr& e, std::size_t step_limit = 1'000'000);

/// Per-shot seed derived from the run seed by SplitMix64.
std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t shot);

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t shots = 1000;
    SimMode mode = SimMode::Density;
    std::size_t max_qubits = 12;
    /// Replays stored intermediate states between measurements instead of
    /// re-stepping every shot from the start. The sampled outcomes are the same.
    bool memoize = true;
};

struct RunReport {
    std::map<std::string, std::size_t> histogram;  // printed value -> count
    std::size_t shots = 0;
    std::vector<std::vector<bool>> transcripts;     // one per shot
};

/// Runs a closed command `shots` times. The command must not mention free
/// variables; sugar is expanded first.
RunReport run(const CmdPtr& m, const RunOptions& opts);

/// Histogram key for a result value.
std::string value_key(const ExprPtr& v);

}  // namespace lqs
