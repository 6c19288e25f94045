#include "safesynth/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "safesynth/boolsynth.hpp"
#include "safesynth/dfa.hpp"
#include "safesynth/errors.hpp"
#include "safesynth/horn.hpp"
#include "safesynth/ltl.hpp"
#include "safesynth/transducer.hpp"

namespace safesynth {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct SolveOutcome {
    bool realizable = false;
    std::optional<Transducer> strategy;
    size_t iterations = 0;  // symbolic only
};

SolveOutcome solve_symbolic(const ExplicitDFA& dfa, const Partition& part, FirstMover mover,
                            const RunLimits& limits, std::ostream* verbose) {
    SymbolicDFA sdfa = encode_symbolic(dfa, part);
    WinningRegionOptions opts;
    opts.early_termination = true;
    opts.verbose = verbose;
    WinningRegion region = winning_region(sdfa, mover, opts);
    SolveOutcome out;
    out.realizable = region.realizable;
    out.iterations = region.iterations;
    if (!region.realizable) return out;

    auto& mgr = *sdfa.mgr;
    std::unordered_map<uint32_t, dd::NodeRef> subst;
    for (size_t j = 0; j < sdfa.zvars.size(); ++j) subst.emplace(sdfa.zvars[j], sdfa.eta[j]);
    dd::NodeRef xi = mgr.compose(region.region, subst);
    std::vector<uint32_t> synth_inputs = sdfa.zvars;
    if (mover == FirstMover::Controller) {
        // the controller commits to the output before seeing the input
        xi = mgr.forall_abstract(xi, sdfa.xvars);
    } else {
        synth_inputs.insert(synth_inputs.end(), sdfa.xvars.begin(), sdfa.xvars.end());
    }
    OutputFunctions gamma = synthesize_outputs(mgr, xi, synth_inputs, sdfa.yvars);
    out.strategy = build_transducer(sdfa, region, gamma, limits);
    return out;
}

SolveOutcome solve_horn(const ExplicitDFA& dfa, const Partition& part, const RunLimits& limits,
                        std::ostream* verbose) {
    SolveOutcome out;
    SafetyAutomaton dsa = dualize_to_dsa(dfa);
    if (dsa.empty()) return out;
    HornInstance h = build_horn(dsa, part, limits);
    HornSolution sol = safesynth::solve_horn(h);
    if (verbose)
        *verbose << "horn: " << h.clause_count << " clauses, " << h.literal_count
                 << " literals, " << sol.model.propagation_steps << " propagation steps\n";
    out.realizable = sol.satisfiable;
    if (sol.satisfiable) out.strategy = horn_strategy(sol, dsa, part, limits);
    return out;
}

void emit_strategy(const RunConfig& config, const Transducer& t) {
    std::string artifact = export_transducer(t, config.out_format);
    if (config.out_file) {
        std::ofstream outf(*config.out_file);
        if (!outf) throw std::runtime_error("cannot write file: " + *config.out_file);
        outf << artifact;
    } else {
        std::cout << artifact << "\n";
    }
}

}  // namespace

RunLimits RunConfig::limits() const {
    RunLimits l;
    l.state_cap = state_cap;
    if (timeout_seconds)
        l.deadline = std::chrono::steady_clock::now() +
                     std::chrono::milliseconds(static_cast<long>(*timeout_seconds * 1000.0));
    return l;
}

int cmd_synth(const RunConfig& config) {
    if (config.mode == RunConfig::Mode::Horn && config.first_mover == FirstMover::Controller) {
        std::cerr << "error: the Horn game is built for the environment moving first; "
                     "use --first env or --mode symbolic\n";
        return kExitError;
    }
    RunLimits limits = config.limits();
    std::ostream* verbose = config.verbose ? &std::cerr : nullptr;

    FormulaRef f = to_nnf(parse_ltl(slurp(config.formula_path)));
    if (config.expand_length) f = expand_until(f, *config.expand_length);
    Partition part = parse_partition(slurp(config.partition_path));

    ExplicitDFA dfa = minimize_dfa(build_bad_prefix_dfa(f, part, limits), limits);
    if (verbose)
        *verbose << "dfa: " << dfa.num_states() << " states after minimization\n";

    std::optional<SolveOutcome> symbolic, horn;
    if (config.mode != RunConfig::Mode::Horn)
        symbolic = solve_symbolic(dfa, part, config.first_mover, limits, verbose);
    if (config.mode != RunConfig::Mode::Symbolic)
        horn = solve_horn(dfa, part, limits, verbose);

    if (symbolic && horn && symbolic->realizable != horn->realizable) {
        std::cerr << "error: solver disagreement: symbolic="
                  << (symbolic->realizable ? "REALIZABLE" : "UNREALIZABLE")
                  << " horn=" << (horn->realizable ? "REALIZABLE" : "UNREALIZABLE") << "\n";
        return kExitError;
    }

    const SolveOutcome& outcome = symbolic ? *symbolic : *horn;
    if (!outcome.realizable) {
        std::cout << "UNREALIZABLE\n";
        return kExitUnrealizable;
    }
    std::cout << "REALIZABLE\n";
    if (outcome.strategy) {
        if (verbose) {
            ValidationOptions vopts;
            vopts.random_plays = 100;
            vopts.adversarial_plays = 10;
            vopts.seed = config.seed;
            ValidationReport rep = validate_strategy(*outcome.strategy, dfa, vopts);
            *verbose << "validation: " << rep.plays << "+" << rep.adversarial_plays
                     << " plays, horizon " << rep.horizon << ", seed " << rep.seed << ", "
                     << rep.violations << " violations\n";
        }
        emit_strategy(config, *outcome.strategy);
    }
    return kExitRealizable;
}

int cmd_expand(const std::string& formula_path, unsigned l) {
    FormulaRef f = to_nnf(parse_ltl(slurp(formula_path)));
    std::cout << to_string(expand_until(f, l)) << "\n";
    return 0;
}

int cmd_dfa(const RunConfig& config) {
    RunLimits limits = config.limits();
    FormulaRef f = to_nnf(parse_ltl(slurp(config.formula_path)));
    if (config.expand_length) f = expand_until(f, *config.expand_length);
    Partition part = parse_partition(slurp(config.partition_path));
    ExplicitDFA dfa = minimize_dfa(build_bad_prefix_dfa(f, part, limits), limits);
    SymbolicDFA sdfa = encode_symbolic(dfa, part);

    std::cout << dfa_to_text(dfa);
    size_t edge_count = 0, accepting = 0;
    for (size_t s = 0; s < dfa.num_states(); ++s) edge_count += dfa.edges[s].size();
    for (size_t s = 0; s < dfa.num_states(); ++s)
        if (dfa.accepting[s]) ++accepting;
    std::cout << "stats: states=" << dfa.num_states() << " edges=" << edge_count
              << " accepting=" << accepting << " bits=" << sdfa.zvars.size() << "\n";
    if (dfa.accepting[dfa.initial]) std::cout << "note: initial state is accepting\n";
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Safety LTL synthesis: bad-prefix automaton construction, Horn-SAT and "
                 "symbolic game solving, strategy extraction"};
    app.require_subcommand(1);

    RunConfig config;
    std::string mode = "symbolic", first = "env";
    unsigned expand_l = 0;
    double timeout = 0;

    auto add_common = [&](CLI::App* cmd, bool with_partition) {
        cmd->add_option("-f,--formula", config.formula_path, "formula file")->required();
        if (with_partition)
            cmd->add_option("-p,--partition", config.partition_path, "partition file")
                ->required();
        cmd->add_option("--state-cap", config.state_cap, "automaton state cap");
        cmd->add_option("--timeout", timeout, "wall-clock budget in seconds");
        cmd->add_flag("--verbose", config.verbose, "diagnostics on stderr");
    };

    CLI::App* synth = app.add_subcommand("synth", "decide realizability and emit a strategy");
    add_common(synth, true);
    synth->add_option("--mode", mode, "symbolic|horn|both")
        ->check(CLI::IsMember({"symbolic", "horn", "both"}));
    synth->add_option("--first", first, "env|ctrl")->check(CLI::IsMember({"env", "ctrl"}));
    synth->add_option("--expand", expand_l, "bound eventualities before solving");
    synth->add_option("--out", config.out_format, "dot|json")
        ->check(CLI::IsMember({"dot", "json"}));
    synth->add_option("--out-file", [&config](const std::vector<std::string>& vals) {
        config.out_file = vals.front();
        return true;
    }, "strategy output path (default: stdout)");
    synth->add_option("--seed", config.seed, "seed for the verbose validation run");

    CLI::App* expand = app.add_subcommand("expand", "print the bounded-eventuality expansion");
    expand->add_option("-f,--formula", config.formula_path, "formula file")->required();
    expand->add_option("-l,--expand", expand_l, "expansion length")->required();

    CLI::App* dfa = app.add_subcommand("dfa", "print the minimized bad-prefix automaton");
    add_common(dfa, true);
    dfa->add_option("--expand", expand_l, "bound eventualities before construction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }

    try {
        if (timeout > 0) config.timeout_seconds = timeout;
        if (synth->parsed() || dfa->parsed()) {
            if (expand_l > 0) config.expand_length = expand_l;
            config.mode = mode == "horn"  ? RunConfig::Mode::Horn
                          : mode == "both" ? RunConfig::Mode::Both
                                           : RunConfig::Mode::Symbolic;
            config.first_mover =
                first == "ctrl" ? FirstMover::Controller : FirstMover::Environment;
        }
        if (synth->parsed()) return cmd_synth(config);
        if (expand->parsed()) return cmd_expand(config.formula_path, expand_l);
        return cmd_dfa(config);
    } catch (const FragmentError& e) {
        std::cerr << "fragment violation: " << e.what() << "\n";
        return kExitFragment;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("safesynth");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace safesynth
