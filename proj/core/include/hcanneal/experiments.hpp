#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcanneal/anneal.hpp"
#include "hcanneal/instance.hpp"

namespace hcanneal {

// One annealing trial inside a batch, plus the bookkeeping the aggregate
// counters need (the instance itself may be trial-local).
struct TrialRecord {
    TrialResult result;
    bool planted_found = false;  // success matching the planted cycle (canonical form)
};

struct BatchResult {
    int trials = 0;
    int found_count = 0;
    int unique_hc_count = 0;  // distinct canonical tours among successes
    int planted_found_count = 0;
    double mean_steps_to_success = 0.0;  // over successes; 0 when there were none
    double wall_ms = 0.0;
    std::vector<TrialRecord> records;  // per trial, in trial order
};

// Runs `trials` independent anneal runs. Per-trial instance and anneal seeds
// derive from (master_seed, trial index); with fresh_instance_per_trial off,
// every trial shares the single instance generated from gen exactly as
// given. Workers may run concurrently (jobs > 1); the aggregate is identical
// to sequential execution.
BatchResult run_batch(const GeneratorSpec& gen, const AnnealParams& params,
                      int trials, std::uint64_t master_seed,
                      bool fresh_instance_per_trial = true, int jobs = 1);

enum class SweptParam { k, m, n };

const char* to_string(SweptParam p);
std::optional<SweptParam> parse_swept_param(std::string_view name);

struct SweepSpec {
    GeneratorSpec generator;  // template; the swept field is overwritten per point
    SweptParam swept = SweptParam::m;
    std::vector<double> values;  // non-empty, strictly increasing
    int trials = 128;
    AnnealParams params;  // template; seeds are derived per trial
    std::uint64_t master_seed = 0;
    bool fresh_instance_per_trial = true;
    int jobs = 1;

    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    int trials = 0;
    int found_count = 0;
    int unique_hc_count = 0;
    int planted_found_count = 0;
    double mean_steps_to_success = 0.0;
    double mean_wall_ms = 0.0;
};

struct SweepReport {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

// CSV with header value,trials,found,unique,planted_found,mean_steps,mean_wall_ms.
std::string to_csv(const SweepReport& report);
// JSON with full metadata (generator, params, seeds, rng) plus the rows.
std::string to_json(const SweepReport& report);

// One batch per value, rows in value order, deterministic per master_seed
// (wall-clock fields aside).
SweepReport sweep(const SweepSpec& spec);

// Verdict of the practical decision procedure. A negative verdict is
// heuristic, not a proof, hence the always-true marker. When a cycle is
// found in the augmented graph, uses_only_original_roads reports whether it
// already existed in the input instance.
struct DecideResult {
    bool hc_found = false;
    bool heuristic = true;
    std::optional<Tour> tour;
    bool uses_only_original_roads = false;
    int original_road_count = 0;
    int augmented_road_count = 0;
    int attempts_used = 0;
};

std::string to_json(const DecideResult& result);

// Augments a copy of inst up to max(R, round(0.58 * N * ln N)) roads and
// anneals up to `attempts` times. Never mutates the input.
DecideResult decide_hcp(const Instance& inst, const AnnealParams& params,
                        int attempts, std::uint64_t seed);

inline constexpr int brute_force_max_cities = 14;

// Exact ground-truth oracle for small instances: Held-Karp bitmask dynamic
// programming over vertex subsets, O(2^N * N^2). Returns some Hamiltonian
// cycle if one exists. Refuses n_cities > brute_force_max_cities.
std::optional<Tour> brute_force_hc(const Instance& inst);

}  // namespace hcanneal
