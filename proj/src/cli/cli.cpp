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

#include "lqs/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lqs/axioms/axioms.hpp"
#include "lqs/core/desugar.hpp"
#include "lqs/core/parser.hpp"
#include "lqs/core/printer.hpp"
#include "lqs/core/term_ops.hpp"
#include "lqs/denote/denotation.hpp"
#include "lqs/interp/interp.hpp"
#include "lqs/qsharp/frontend.hpp"
#include "lqs/typecheck/typecheck.hpp"

namespace lqs::cli {

using json = nlohmann::ordered_json;

std::size_t default_max_qubits() {
    if (const char* v = std::getenv("LQS_MAX_QUBITS")) {
        char* end = nullptr;
        unsigned long n = std::strtoul(v, &end, 10);
        if (end && *end == '\0' && n > 0) return n;
    }
    return 10;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    std::string kind;
    std::string message;
    SourceLoc loc;
};

std::string fmt_double(double v, const char* spec = "%.3e") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

class Session {
public:
    Session(const CliConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    int dispatch() {
        const std::string& sc = cfg_.subcommand;
        if (sc == "elab") return each_input([&](const std::string& f) { return elab(f); });
        if (sc == "check") return each_input([&](const std::string& f) { return check(f); });
        if (sc == "run") return each_input([&](const std::string& f) { return run(f); });
        if (sc == "simplify") return each_input([&](const std::string& f) { return simplify(f); });
        if (sc == "equiv") return equiv();
        if (sc == "axioms") return axioms();
        throw UsageError("unknown subcommand '" + sc + "'");
    }

private:
    struct Program {
        std::string file;
        QubitContext ctx;
        Term term;
        std::optional<qs::QsProgram> source;
        std::optional<qs::Elaboration> elab;
    };

    template <class F>
    int each_input(F f) {
        if (cfg_.inputs.empty()) throw UsageError(cfg_.subcommand + " needs an input file");
        int code = kExitOk;
        for (const auto& in : cfg_.inputs) code = std::max(code, f(in));
        return code;
    }

    // ------------------------------------------------------------ loading

    static bool is_qs(const std::string& file) { return file.size() > 3 && file.compare(file.size() - 3, 3, ".qs") == 0; }

    static std::string read(const std::string& file) {
        std::ifstream f(file, std::ios::binary);
        if (!f) throw UsageError("cannot read '" + file + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    // Parse, elaborate and type errors become diagnostics.
    template <class F>
    std::optional<Diagnostic> guarded(F f) {
        try {
            f();
        } catch (const ParseError& e) {
            return Diagnostic{e.kind_name(), e.what(), e.loc()};
        } catch (const qs::QsError& e) {
            return Diagnostic{qs::error_kind_name(e.kind()), e.what(), e.loc()};
        } catch (const TypeError& e) {
            return Diagnostic{type_error_kind_name(e.kind()), e.what(), e.loc()};
        }
        return std::nullopt;
    }

    Program load(const std::string& file) {
        Program p;
        p.file = file;
        std::string text = read(file);
        if (is_qs(file)) {
            p.source = qs::parse_qsharp(text);
            p.elab = qs::elaborate(*p.source);
            p.term = p.elab->term;
        } else {
            auto parsed = parse_program(text);
            p.term = parsed.term;
            p.ctx = parsed.context;
        }
        return p;
    }

    // The command a program stands for: the entry operation of a Q# file, a
    // .lqs command, or a .lqs expression of command type.
    CmdPtr command(Program& p) {
        if (p.elab) return entry_command(p);
        if (std::holds_alternative<CmdPtr>(p.term)) return std::get<CmdPtr>(p.term);
        TypePtr t = desugar(check_program(p.ctx, p.term));
        if (!as<ty::Cmd>(strip_singletons(t)))
            throw UsageError(p.file + ": program is an expression of type " + print(t) + ", not a command");
        std::string x = fresh_var_name("x");
        return mk::bnd(std::get<ExprPtr>(p.term), x, mk::ret(mk::var(x)));
    }

    CmdPtr entry_command(Program& p) {
        std::string name = cfg_.entry;
        if (name.empty()) name = p.source->entry_point;
        if (name.empty() && !p.elab->roots.empty()) name = p.elab->roots.back();
        const qs::QsCallable* c = p.source->find(name);
        const qs::Instance* inst = p.elab->root(name);
        if (!c || !inst) throw UsageError(p.file + ": no callable '" + name + "' to run");
        std::size_t next = 0;
        p.ctx.clear();
        ExprPtr arg = entry_argument(c->params, *inst, next, p);
        CmdPtr body = c->is_operation ? mk::call(mk::var(inst->var), arg) : mk::ret(mk::app(mk::var(inst->var), arg));
        return p.elab->with_body(body);
    }

    ExprPtr entry_argument(const qs::QsPattern& pat, const qs::Instance& inst, std::size_t& next, Program& p) {
        if (pat.is_tuple()) {
            std::vector<ExprPtr> items;
            for (const auto& i : pat.items) items.push_back(entry_argument(i, inst, next, p));
            if (items.empty()) return mk::unit();
            return items.size() == 1 ? items.front() : mk::tuple(items);
        }
        return entry_value(*pat.type, pat.name, inst, next, p);
    }

    ExprPtr entry_value(const qs::QsType& t, const std::string& name, const qs::Instance& inst, std::size_t& next,
                        Program& p) {
        switch (t.kind) {
            case qs::QsType::Kind::Qubit: {
                std::string var = qs::sanitize_name(name);
                p.ctx.push_back({var, inst.symbols.at(next++)});
                return mk::var(var);
            }
            case qs::QsType::Kind::Unit: return mk::unit();
            case qs::QsType::Kind::Tuple: {
                std::vector<ExprPtr> items;
                for (std::size_t i = 0; i < t.items.size(); ++i)
                    items.push_back(entry_value(t.items[i], name + std::to_string(i + 1), inst, next, p));
                return mk::tuple(items);
            }
            default: throw UsageError(p.file + ": entry callable '" + inst.callable + "' takes classical arguments");
        }
    }

    // Context qubits start fresh in |0>.
    static CmdPtr allocate_context(const QubitContext& ctx, CmdPtr m) {
        for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) m = mk::new_(it->var, m, it->sym);
        return m;
    }

    // ------------------------------------------------------------ output

    void diagnostic(const std::string& file, const Diagnostic& d, const std::string& severity = "error") {
        if (cfg_.format == Format::Json) {
            json j;
            j["severity"] = severity;
            j["kind"] = d.kind;
            j["file"] = file;
            j["line"] = d.loc.line;
            j["col"] = d.loc.col;
            j["message"] = d.message;
            out_ << j.dump() << "\n";
        } else {
            err_ << severity << ":" << file << ":" << d.loc.line << ":" << d.loc.col << ": " << d.kind << ": "
                 << d.message << "\n";
        }
    }

    void record(const json& j) { out_ << j.dump() << "\n"; }

    // ------------------------------------------------------------ subcommands

    int elab(const std::string& file) {
        if (!is_qs(file)) throw UsageError("elab expects a .qs file");
        Program p;
        if (auto d = guarded([&] { p = load(file); })) {
            diagnostic(file, *d);
            return kExitFailure;
        }
        SymbolNamer names;
        std::string body = print(std::get<ExprPtr>(p.term), names);
        std::vector<std::string> sig;
        for (const auto& s : p.elab->free_symbols) sig.push_back(names.name(s));
        if (cfg_.format == Format::Json) {
            json j;
            j["file"] = file;
            j["signature"] = sig;
            json insts = json::array();
            for (const auto& i : p.elab->instances) {
                json r;
                r["callable"] = i.callable;
                r["name"] = i.var;
                std::vector<std::string> syms;
                for (const auto& s : i.symbols) syms.push_back(names.name(s));
                r["symbols"] = syms;
                insts.push_back(r);
            }
            j["instances"] = insts;
            j["program"] = body;
            record(j);
        } else {
            out_ << "-- signature:";
            for (const auto& s : sig) out_ << " " << s;
            out_ << "\n" << body << "\n";
        }
        return kExitOk;
    }

    int check(const std::string& file) {
        Program p;
        TypePtr t;
        if (auto d = guarded([&] {
                p = load(file);
                t = check_program(p.ctx, p.term);
            })) {
            diagnostic(file, *d);
            return kExitFailure;
        }
        if (cfg_.format == Format::Json) {
            diagnostic(file, Diagnostic{"Ok", print(t), {}}, "info");
        } else {
            out_ << "ok:" << file << ": " << print(t) << "\n";
        }
        return kExitOk;
    }

    int run(const std::string& file) {
        Program p;
        CmdPtr m;
        if (auto d = guarded([&] {
                p = load(file);
                m = command(p);
                check_program(p.ctx, Term{m});
            })) {
            diagnostic(file, *d);
            return kExitFailure;
        }
        RunOptions ro;
        ro.seed = cfg_.seed;
        ro.shots = cfg_.shots;
        ro.mode = cfg_.mode;
        ro.max_qubits = cfg_.max_qubits;
        RunReport rep = lqs::run(allocate_context(p.ctx, m), ro);
        for (const auto& [outcome, count] : rep.histogram) {
            double prob = rep.shots ? static_cast<double>(count) / static_cast<double>(rep.shots) : 0.0;
            if (cfg_.format == Format::Json) {
                json j;
                j["outcome"] = outcome;
                j["count"] = count;
                j["probability"] = prob;
                record(j);
            } else {
                out_ << outcome << "\t" << count << "\t" << fmt_double(prob, "%.4f") << "\n";
            }
        }
        return kExitOk;
    }

    int simplify(const std::string& file) {
        Program p;
        CmdPtr m;
        if (auto d = guarded([&] {
                p = load(file);
                m = command(p);
                check_program(p.ctx, Term{m});
            })) {
            diagnostic(file, *d);
            return kExitFailure;
        }
        auto res = lqs::simplify(desugar(m));
        std::string text = print_program(Term{res.cmd}, p.ctx);
        if (cfg_.format == Format::Json) {
            json j;
            j["file"] = file;
            j["rewrites"] = res.rewrites;
            j["budget_exceeded"] = res.budget_exceeded;
            j["program"] = text;
            record(j);
        } else {
            out_ << text;
            if (text.empty() || text.back() != '\n') out_ << "\n";
        }
        return kExitOk;
    }

    int equiv() {
        if (cfg_.inputs.size() != 2) throw UsageError("equiv needs exactly two input files");
        Program a;
        Program b;
        CmdPtr ma;
        CmdPtr mb;
        for (int side = 0; side < 2; ++side) {
            Program& p = side == 0 ? a : b;
            CmdPtr& m = side == 0 ? ma : mb;
            const std::string& file = cfg_.inputs[static_cast<std::size_t>(side)];
            if (auto d = guarded([&] {
                    p = load(file);
                    m = command(p);
                    check_program(p.ctx, Term{m});
                })) {
                diagnostic(file, *d);
                return kExitFailure;
            }
        }
        auto vars = [](const QubitContext& ctx) {
            std::vector<std::string> v;
            for (const auto& e : ctx) v.push_back(e.var);
            return v;
        };
        if (vars(a.ctx) != vars(b.ctx))
            throw UsageError("equiv: the programs declare different contexts");
        DenoteOptions opts;
        opts.max_qubits = cfg_.max_qubits;
        Instrument ia;
        Instrument ib;
        try {
            ia = denote(a.ctx, ma, opts);
            ib = denote(b.ctx, mb, opts);
        } catch (const DenotationError& e) {
            throw UsageError(std::string("equiv: ") + e.what());
        }
        auto rep = lqs::equiv(ia, ib, cfg_.tol);
        if (cfg_.format == Format::Json) {
            json j;
            j["equivalent"] = rep.equivalent;
            j["max_deviation"] = rep.max_deviation;
            j["unmatched"] = rep.unmatched;
            record(j);
        } else {
            out_ << "equivalent: " << (rep.equivalent ? "yes" : "no") << "\n";
            out_ << "max_deviation: " << fmt_double(rep.max_deviation) << "\n";
            for (const auto& u : rep.unmatched) out_ << "unmatched: " << u << "\n";
        }
        return rep.equivalent ? kExitOk : kExitFailure;
    }

    int axioms() {
        std::vector<AxiomId> ids;
        for (const auto& in : cfg_.inputs) {
            auto id = parse_axiom_id(in);
            if (!id) throw UsageError("unknown axiom '" + in + "'");
            ids.push_back(*id);
        }
        if (ids.empty()) ids = all_axioms();
        std::sort(ids.begin(), ids.end());
        DenoteOptions opts;
        opts.max_qubits = cfg_.max_qubits;
        bool all = true;
        if (cfg_.format == Format::Text) out_ << "axiom\ttrials\tpassed\tmax_deviation\tstatus\n";
        for (AxiomId id : ids) {
            std::uint64_t seed = cfg_.seed * 1000003u + static_cast<std::uint64_t>(axiom_letter(id));
            auto res = check_axiom_suite(id, cfg_.trials, seed, cfg_.tol, opts);
            bool ok = res.passed == res.trials;
            all = all && ok;
            std::string letter(1, axiom_letter(id));
            if (cfg_.format == Format::Json) {
                json j;
                j["axiom"] = letter;
                j["trials"] = res.trials;
                j["passed"] = res.passed;
                j["max_deviation"] = res.max_deviation;
                record(j);
            } else {
                out_ << letter << "\t" << res.trials << "\t" << res.passed << "\t" << fmt_double(res.max_deviation) << "\t"
                     << (ok ? "pass" : "FAIL") << "\n";
                if (!ok && !res.first_failure.empty()) err_ << "axiom " << letter << ": " << res.first_failure << "\n";
            }
        }
        return all ? kExitOk : kExitFailure;
    }

    const CliConfig& cfg_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return Session(cfg, out, err).dispatch();
    } catch (const UsageError& e) {
        err << "lqs: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "lqs: " << e.what() << "\n";
        return kExitUsage;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"lqs: typechecker, interpreter and equivalence checker for the core calculus, with a Q# frontend"};
    app.require_subcommand(1);
    CliConfig cfg;
    cfg.max_qubits = default_max_qubits();
    std::string mode = "density";
    std::string format = "text";
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--shots", cfg.shots, "Shots for run")->capture_default_str();
    app.add_option("--mode", mode, "Simulator for run")
        ->check(CLI::IsMember({"density", "statevector"}))
        ->capture_default_str();
    app.add_option("--tol", cfg.tol, "Equivalence tolerance")->capture_default_str();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--max-qubits", cfg.max_qubits, "Qubit budget (default from LQS_MAX_QUBITS)")->capture_default_str();
    app.add_option("--trials", cfg.trials, "Random instances per axiom")->capture_default_str();
    app.add_option("--entry", cfg.entry, "Q# callable run by run/simplify/equiv");

    struct Sub {
        const char* name;
        const char* help;
        bool files_required;
    };
    const Sub subs[] = {
        {"elab", "Elaborate a Q# file and print the core term", true},
        {"check", "Typecheck .lqs or .qs files", true},
        {"run", "Sample a program and print the outcome histogram", true},
        {"equiv", "Compare the denotations of two programs", true},
        {"axioms", "Check random instances of the equational axioms (optionally only the given letters)", false},
        {"simplify", "Normalize a program with the rewrite rules", true},
    };
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->fallthrough();
        auto* opt = sc->add_option(s.files_required ? "files" : "axioms", cfg.inputs, s.files_required ? "Inputs" : "Axiom letters");
        if (s.files_required) opt->required();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.mode = mode == "statevector" ? SimMode::Statevector : SimMode::Density;
    cfg.format = format == "json" ? Format::Json : Format::Text;
    return execute(cfg, out, err);
}

}  // namespace lqs::cli
