// Command-line front end: generate instances, solve them, run the sweep
// experiments and the practical decision procedure. Results go to stdout
// (JSON or CSV), progress and audit lines to stderr, so pipelines stay
// clean. Exit codes: 0 done / HC found, 1 no HC within budget (solve,
// decide, oracle), 2 usage or input error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hcanneal/anneal.hpp"
#include "hcanneal/experiments.hpp"
#include "hcanneal/instance.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace hcanneal;

constexpr int kExitFound = 0;
constexpr int kExitNotFound = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open for writing: " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

ordered_json params_config(const AnnealParams& p) {
    ordered_json j;
    j["t0"] = p.t0;
    j["fc"] = p.fc;
    j["na"] = p.na;
    j["moves_mult"] = p.moves_mult;
    j["k"] = p.k;
    j["swap_prob"] = p.swap_prob;
    j["max_segment"] = p.max_segment;
    return j;
}

void attach_anneal_flags(CLI::App* cmd, AnnealParams& p) {
    cmd->add_option("--t0", p.t0, "initial temperature T_0")->capture_default_str();
    cmd->add_option("--fc", p.fc, "geometric cooling factor F_c in (0,1)")
        ->capture_default_str();
    cmd->add_option("--na", p.na, "annealing steps N_a")->capture_default_str();
    cmd->add_option("--moves-mult", p.moves_mult,
                    "proposals per step = round(moves_mult * N^2)")
        ->capture_default_str();
    cmd->add_option("--k", p.k, "Boltzmann-like acceptance constant")
        ->capture_default_str();
    cmd->add_option("--swap-prob", p.swap_prob,
                    "probability a proposal is a swap (else transport)")
        ->capture_default_str();
    cmd->add_option("--max-segment", p.max_segment,
                    "transport segment cap (0 = floor(N/2))")
        ->capture_default_str();
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string kind;
    int n = 0;
    double m = 0.0;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int run_gen(const GenArgs& args) {
    const auto kind = parse_gen_kind(args.kind);
    if (!kind) throw Error("unknown generator kind: " + args.kind);
    GeneratorSpec spec{*kind, args.n, args.m, args.seed};

    ordered_json config;
    config["command"] = "gen";
    config["kind"] = args.kind;
    config["n_cities"] = args.n;
    config["m"] = args.m;
    config["seed"] = args.seed;
    config["out"] = args.out;
    std::cerr << "gen: " << config.dump() << "\n";

    const int quota = road_count(spec.m, spec.n_cities);
    const double exact = spec.m * spec.n_cities * std::log(double(spec.n_cities));
    char audit[160];
    std::snprintf(audit, sizeof(audit),
                  "gen: R = round(m * N * ln N) = round(%.6f * %d * %.6f) = round(%.4f) = %d\n",
                  spec.m, spec.n_cities, std::log(double(spec.n_cities)), exact, quota);
    std::cerr << audit;

    const Instance inst = generate(spec);
    std::ostringstream text;
    write_instance(inst, text);
    emit(text.str(), args.out);
    return kExitFound;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    std::string instance;
    AnnealParams params;
    std::string out = "-";
};

int run_solve(const SolveArgs& args) {
    const Instance inst = load_instance(args.instance);
    const TrialResult result = anneal(inst, args.params);

    ordered_json envelope;
    envelope["command"] = "solve";
    ordered_json config;
    config["instance"] = args.instance;
    config["params"] = params_config(args.params);
    config["params"]["seed"] = args.params.seed;
    envelope["config"] = std::move(config);
    envelope["rng"] = Rng::algorithm;
    envelope["result"] = ordered_json::parse(to_json(result));
    emit(envelope.dump(2), args.out);
    return result.found ? kExitFound : kExitNotFound;
}

// ---------------------------------------------------------------------------
// sweep

struct Preset {
    const char* name;
    GenKind kind;
    SweptParam param;
    int n;           // generator N (unused for n sweeps)
    double fixed_m;  // generator m (unused when m is swept)
    std::vector<double> values;
    int trials;
};

const std::vector<Preset>& presets() {
    // Desk-scale trial counts; pass --trials 128 to match the full runs.
    // table1 stops at m = 0.8: the stride pattern's whole edge pool is
    // smaller than 0.9 * N * ln N, so denser quotas are infeasible.
    static const std::vector<Preset> table = {
        {"fig2", GenKind::random_planted, SweptParam::k, 150, 0.5,
         {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}, 16},
        {"fig3", GenKind::random_planted, SweptParam::m, 150, 0.0,
         {0.3, 0.4, 0.45, 0.5, 0.52, 0.54, 0.56, 0.58, 0.62, 0.66, 0.7}, 32},
        {"fig4", GenKind::random_unplanted, SweptParam::m, 200, 0.0,
         {0.5, 0.58, 0.7, 0.8, 0.9, 1.0, 1.2, 1.6, 2.0, 3.0, 4.0}, 32},
        {"fig5", GenKind::stride_planted, SweptParam::m, 150, 0.0,
         {0.3, 0.4, 0.45, 0.5, 0.52, 0.54, 0.56, 0.58, 0.62, 0.66, 0.7}, 32},
        {"table1", GenKind::stride_unplanted, SweptParam::m, 200, 0.0,
         {0.1, 0.2, 0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5, 0.52, 0.54, 0.6, 0.7, 0.8},
         16},
        {"table2", GenKind::random_planted, SweptParam::n, 0, 0.7,
         {200, 300, 400, 500}, 16},
    };
    return table;
}

struct SweepArgs {
    std::string preset;
    std::string generator;
    std::string param;
    std::vector<double> values;
    int n = 0;
    double m = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    bool no_fresh = false;
    int jobs = 1;
    std::string format = "csv";
    std::string out = "-";
    AnnealParams params;
};

int run_sweep(const SweepArgs& args, const CLI::App* cmd) {
    SweepSpec spec;
    spec.params = args.params;
    spec.trials = 16;

    if (!args.preset.empty()) {
        const Preset* preset = nullptr;
        for (const auto& p : presets())
            if (args.preset == p.name) preset = &p;
        if (!preset) throw Error("unknown preset: " + args.preset);
        spec.generator.kind = preset->kind;
        spec.generator.n_cities = preset->n;
        spec.generator.m = preset->fixed_m;
        spec.swept = preset->param;
        spec.values = preset->values;
        spec.trials = preset->trials;
    } else {
        if (args.generator.empty() || args.param.empty())
            throw Error("custom sweeps need --generator and --param (or use --preset)");
        const auto kind = parse_gen_kind(args.generator);
        if (!kind) throw Error("unknown generator kind: " + args.generator);
        const auto param = parse_swept_param(args.param);
        if (!param) throw Error("unknown sweep parameter: " + args.param);
        spec.generator.kind = *kind;
        spec.swept = *param;
        spec.values = args.values;
    }

    if (cmd->count("--values")) spec.values = args.values;
    if (cmd->count("--trials")) spec.trials = args.trials;
    if (cmd->count("--n")) {
        if (spec.swept == SweptParam::n)
            spec.values = {static_cast<double>(args.n)};
        else
            spec.generator.n_cities = args.n;
    }
    if (cmd->count("--m")) {
        if (spec.swept == SweptParam::m)
            throw Error("--m conflicts with sweeping m; use --values");
        spec.generator.m = args.m;
    }
    if (cmd->count("--k") && spec.swept == SweptParam::k)
        throw Error("--k conflicts with sweeping k; use --values");

    if (spec.swept != SweptParam::n && spec.generator.n_cities < 3)
        throw Error("sweep needs --n (at least 3 cities)");
    if (spec.swept != SweptParam::m && !(spec.generator.m > 0.0))
        throw Error("sweep needs --m (positive road multiplier)");

    spec.master_seed = args.seed;
    spec.fresh_instance_per_trial = !args.no_fresh;
    spec.jobs = args.jobs;

    if (args.format != "csv" && args.format != "json")
        throw Error("unknown output format: " + args.format);

    ordered_json config;
    config["command"] = "sweep";
    config["preset"] = args.preset.empty() ? ordered_json(nullptr) : ordered_json(args.preset);
    ordered_json gen_cfg;
    gen_cfg["kind"] = to_string(spec.generator.kind);
    gen_cfg["n_cities"] = spec.generator.n_cities;
    gen_cfg["m"] = spec.generator.m;
    gen_cfg["seed"] = spec.generator.seed;
    config["generator"] = std::move(gen_cfg);
    config["swept_parameter"] = to_string(spec.swept);
    config["values"] = spec.values;
    config["trials"] = spec.trials;
    config["params"] = params_config(spec.params);
    config["master_seed"] = spec.master_seed;
    config["fresh_instance_per_trial"] = spec.fresh_instance_per_trial;
    config["jobs"] = spec.jobs;
    config["format"] = args.format;
    std::cerr << "sweep: " << config.dump() << "\n";

    const SweepReport report = sweep(spec);

    if (args.format == "csv") {
        emit(to_csv(report), args.out);
    } else {
        ordered_json envelope;
        envelope["command"] = "sweep";
        envelope["config"] = std::move(config);
        envelope["report"] = ordered_json::parse(to_json(report));
        emit(envelope.dump(2), args.out);
    }
    return kExitFound;
}

// ---------------------------------------------------------------------------
// decide

struct DecideArgs {
    std::string instance;
    int attempts = 4;
    std::uint64_t seed = 0;
    std::string out = "-";
    AnnealParams params;
};

int run_decide(const DecideArgs& args) {
    const Instance inst = load_instance(args.instance);
    const DecideResult result = decide_hcp(inst, args.params, args.attempts, args.seed);

    ordered_json envelope;
    envelope["command"] = "decide";
    ordered_json config;
    config["instance"] = args.instance;
    config["attempts"] = args.attempts;
    config["seed"] = args.seed;
    config["params"] = params_config(args.params);
    envelope["config"] = std::move(config);
    envelope["rng"] = Rng::algorithm;
    envelope["verdict"] = result.hc_found ? "hc_found" : "no_hc_detected";
    envelope["result"] = ordered_json::parse(to_json(result));
    emit(envelope.dump(2), args.out);
    return result.hc_found ? kExitFound : kExitNotFound;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
    std::string instance;
    std::string out = "-";
};

int run_oracle(const OracleArgs& args) {
    const Instance inst = load_instance(args.instance);
    const auto tour = brute_force_hc(inst);

    ordered_json envelope;
    envelope["command"] = "oracle";
    ordered_json config;
    config["instance"] = args.instance;
    envelope["config"] = std::move(config);
    ordered_json result;
    result["hc_exists"] = tour.has_value();
    result["tour"] = tour ? ordered_json(tour->order) : ordered_json(nullptr);
    envelope["result"] = std::move(result);
    emit(envelope.dump(2), args.out);
    return tour ? kExitFound : kExitNotFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulated-annealing solver and experiment runner for the "
                 "directed Hamiltonian cycle problem"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
    gen_cmd->add_option("--kind", gen_args.kind,
                        "random-planted|random-unplanted|stride-planted|stride-unplanted")
        ->required();
    gen_cmd->add_option("--n", gen_args.n, "number of cities")->required();
    gen_cmd->add_option("--m", gen_args.m, "road multiplier; R = round(m * N * ln N)")
        ->required();
    gen_cmd->add_option("--seed", gen_args.seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("--out", gen_args.out, "output path ('-' = stdout)")
        ->capture_default_str();

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "run one annealing trial on an instance file");
    solve_cmd->add_option("instance", solve_args.instance, "instance file")->required();
    attach_anneal_flags(solve_cmd, solve_args.params);
    solve_cmd->add_option("--seed", solve_args.params.seed, "anneal seed")
        ->capture_default_str();
    solve_cmd->add_option("--out", solve_args.out, "output path ('-' = stdout)")
        ->capture_default_str();

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep (k, m or n)");
    sweep_cmd->add_option("--preset", sweep_args.preset,
                          "fig2|fig3|fig4|fig5|table1|table2");
    sweep_cmd->add_option("--generator", sweep_args.generator, "generator kind for custom sweeps");
    sweep_cmd->add_option("--param", sweep_args.param, "swept parameter: k|m|n");
    sweep_cmd->add_option("--values", sweep_args.values, "swept values, comma separated")
        ->delimiter(',');
    sweep_cmd->add_option("--n", sweep_args.n, "city count (or the single n value for n sweeps)");
    sweep_cmd->add_option("--m", sweep_args.m, "fixed road multiplier (non-m sweeps)");
    sweep_cmd->add_option("--trials", sweep_args.trials, "trials per value point");
    sweep_cmd->add_option("--seed", sweep_args.seed, "master seed")->capture_default_str();
    sweep_cmd->add_flag("--no-fresh", sweep_args.no_fresh,
                        "share one instance across trials instead of regenerating");
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "parallel trial workers")
        ->capture_default_str();
    sweep_cmd->add_option("--format", sweep_args.format, "csv|json")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_args.out, "output path ('-' = stdout)")
        ->capture_default_str();
    attach_anneal_flags(sweep_cmd, sweep_args.params);

    DecideArgs decide_args;
    auto* decide_cmd = app.add_subcommand(
        "decide", "augment to 0.58 * N * ln N roads and hunt for a cycle (heuristic)");
    decide_cmd->add_option("instance", decide_args.instance, "instance file")->required();
    decide_cmd->add_option("--attempts", decide_args.attempts, "annealing attempts")
        ->capture_default_str();
    decide_cmd->add_option("--seed", decide_args.seed, "master seed")->capture_default_str();
    attach_anneal_flags(decide_cmd, decide_args.params);
    decide_cmd->add_option("--out", decide_args.out, "output path ('-' = stdout)")
        ->capture_default_str();

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "exact small-N answer via Held-Karp (N <= 14)");
    oracle_cmd->add_option("instance", oracle_args.instance, "instance file")->required();
    oracle_cmd->add_option("--out", oracle_args.out, "output path ('-' = stdout)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) return run_gen(gen_args);
        if (solve_cmd->parsed()) return run_solve(solve_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args, sweep_cmd);
        if (decide_cmd->parsed()) return run_decide(decide_args);
        if (oracle_cmd->parsed()) return run_oracle(oracle_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
