#include "hcanneal/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "hcanneal/rng.hpp"

namespace hcanneal {

namespace {

using ordered_json = nlohmann::ordered_json;

// Seed streams inside one batch: per-trial instance and anneal seeds.
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kAnnealStream = 1;
// Seed streams inside decide_hcp: augmentation, then attempts.
constexpr std::uint64_t kAugmentStream = 0;
constexpr std::uint64_t kAttemptStream = 1;

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
        .count();
}

// Runs body(0..count-1), possibly on several threads. Results must be
// written to per-index slots so the aggregate cannot depend on scheduling.
void for_each_index(int count, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    const int workers = std::min(jobs, count);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

ordered_json params_json(const AnnealParams& p) {
    ordered_json j;
    j["t0"] = p.t0;
    j["fc"] = p.fc;
    j["na"] = p.na;
    j["moves_mult"] = p.moves_mult;
    j["k"] = p.k;
    j["swap_prob"] = p.swap_prob;
    j["max_segment"] = p.max_segment;
    j["seed"] = p.seed;
    return j;
}

ordered_json generator_json(const GeneratorSpec& g) {
    ordered_json j;
    j["kind"] = to_string(g.kind);
    j["n_cities"] = g.n_cities;
    j["m"] = g.m;
    j["seed"] = g.seed;
    return j;
}

std::string format_number(double v) { return ordered_json(v).dump(); }

}  // namespace

const char* to_string(SweptParam p) {
    switch (p) {
        case SweptParam::k: return "k";
        case SweptParam::m: return "m";
        case SweptParam::n: return "n";
    }
    return "unknown";
}

std::optional<SweptParam> parse_swept_param(std::string_view name) {
    if (name == "k") return SweptParam::k;
    if (name == "m") return SweptParam::m;
    if (name == "n") return SweptParam::n;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (values.empty()) throw Error("sweep needs at least one value");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw Error("sweep values must be strictly increasing");
    if (trials < 1) throw Error("sweep needs at least one trial");
    if (jobs < 1) throw Error("jobs must be at least 1");
    if (swept == SweptParam::n) {
        for (double v : values) {
            const double r = std::round(v);
            if (std::abs(v - r) > 1e-9 || r < 3)
                throw Error("n sweep values must be integers >= 3");
        }
    }
}

BatchResult run_batch(const GeneratorSpec& gen, const AnnealParams& params,
                      int trials, std::uint64_t master_seed,
                      bool fresh_instance_per_trial, int jobs) {
    if (trials < 1) throw Error("run_batch needs at least one trial");

    const double t_begin = now_ms();

    std::optional<Instance> shared;
    if (!fresh_instance_per_trial) shared.emplace(generate(gen));

    BatchResult batch;
    batch.trials = trials;
    batch.records.resize(static_cast<std::size_t>(trials));

    for_each_index(trials, jobs, [&](int i) {
        const auto ti = static_cast<std::uint64_t>(i);
        const Instance* inst = nullptr;
        std::optional<Instance> local;
        if (fresh_instance_per_trial) {
            GeneratorSpec g = gen;
            g.seed = derive_seed(master_seed, ti, kInstanceStream);
            local.emplace(generate(g));
            inst = &*local;
        } else {
            inst = &*shared;
        }
        AnnealParams p = params;
        p.seed = derive_seed(master_seed, ti, kAnnealStream);

        TrialRecord rec;
        rec.result = anneal(*inst, p);
        if (rec.result.found) {
            if (!verify_hc(*inst, rec.result.tour))
                throw Error("internal: reported success fails verify_hc");
            rec.result.tour = canonical_form(rec.result.tour);
            rec.planted_found =
                inst->planted_cycle() &&
                canonical_form(*inst->planted_cycle()) == rec.result.tour;
        }
        batch.records[static_cast<std::size_t>(i)] = std::move(rec);
    });

    std::set<std::vector<int>> unique;
    double steps_sum = 0.0;
    for (const auto& rec : batch.records) {
        if (!rec.result.found) continue;
        ++batch.found_count;
        unique.insert(rec.result.tour.order);
        steps_sum += rec.result.steps_used;
        if (rec.planted_found) ++batch.planted_found_count;
    }
    batch.unique_hc_count = static_cast<int>(unique.size());
    if (batch.found_count > 0)
        batch.mean_steps_to_success = steps_sum / batch.found_count;
    batch.wall_ms = now_ms() - t_begin;
    return batch;
}

SweepReport sweep(const SweepSpec& spec) {
    spec.validate();
    SweepReport report;
    report.spec = spec;
    report.rows.reserve(spec.values.size());

    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        const double value = spec.values[vi];
        GeneratorSpec gen = spec.generator;
        AnnealParams params = spec.params;
        switch (spec.swept) {
            case SweptParam::k: params.k = value; break;
            case SweptParam::m: gen.m = value; break;
            case SweptParam::n: gen.n_cities = static_cast<int>(std::llround(value)); break;
        }
        const std::uint64_t batch_seed = derive_seed(spec.master_seed, vi, 0);
        BatchResult batch = run_batch(gen, params, spec.trials, batch_seed,
                                      spec.fresh_instance_per_trial, spec.jobs);
        SweepRow row;
        row.value = value;
        row.trials = batch.trials;
        row.found_count = batch.found_count;
        row.unique_hc_count = batch.unique_hc_count;
        row.planted_found_count = batch.planted_found_count;
        row.mean_steps_to_success = batch.mean_steps_to_success;
        row.mean_wall_ms = batch.wall_ms / batch.trials;
        report.rows.push_back(row);
    }
    return report;
}

std::string to_csv(const SweepReport& report) {
    std::string out = "value,trials,found,unique,planted_found,mean_steps,mean_wall_ms\n";
    for (const auto& row : report.rows) {
        out += format_number(row.value);
        out += ',' + std::to_string(row.trials);
        out += ',' + std::to_string(row.found_count);
        out += ',' + std::to_string(row.unique_hc_count);
        out += ',' + std::to_string(row.planted_found_count);
        out += ',' + format_number(row.mean_steps_to_success);
        out += ',' + format_number(row.mean_wall_ms);
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepReport& report) {
    ordered_json j;
    j["generator"] = generator_json(report.spec.generator);
    j["swept_parameter"] = to_string(report.spec.swept);
    j["values"] = report.spec.values;
    j["trials"] = report.spec.trials;
    j["params"] = params_json(report.spec.params);
    j["master_seed"] = report.spec.master_seed;
    j["fresh_instance_per_trial"] = report.spec.fresh_instance_per_trial;
    j["jobs"] = report.spec.jobs;
    j["rng"] = Rng::algorithm;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["value"] = row.value;
        r["trials"] = row.trials;
        r["found"] = row.found_count;
        r["unique"] = row.unique_hc_count;
        r["planted_found"] = row.planted_found_count;
        r["mean_steps"] = row.mean_steps_to_success;
        r["mean_wall_ms"] = row.mean_wall_ms;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2);
}

DecideResult decide_hcp(const Instance& inst, const AnnealParams& params,
                        int attempts, std::uint64_t seed) {
    if (attempts < 1) throw Error("decide_hcp needs at least one attempt");

    const int n = inst.n_cities();
    const int target = std::max(inst.num_roads(), road_count(0.58, n));
    const Instance augmented =
        augment(inst, target, derive_seed(seed, 0, kAugmentStream));

    DecideResult out;
    out.original_road_count = inst.num_roads();
    out.augmented_road_count = augmented.num_roads();

    for (int attempt = 0; attempt < attempts; ++attempt) {
        AnnealParams p = params;
        p.seed = derive_seed(seed, static_cast<std::uint64_t>(attempt), kAttemptStream);
        TrialResult trial = anneal(augmented, p);
        out.attempts_used = attempt + 1;
        if (!trial.found) continue;

        out.hc_found = true;
        out.tour = trial.tour;
        bool original_only = true;
        for (int i = 0; i < n && original_only; ++i) {
            const int u = trial.tour.order[static_cast<std::size_t>(i)];
            const int v = trial.tour.order[static_cast<std::size_t>(i + 1 == n ? 0 : i + 1)];
            original_only = inst.has_edge(u, v);
        }
        out.uses_only_original_roads = original_only;
        return out;
    }
    return out;
}

std::string to_json(const DecideResult& result) {
    ordered_json j;
    j["hc_found"] = result.hc_found;
    j["heuristic"] = result.heuristic;
    if (result.tour)
        j["tour"] = result.tour->order;
    else
        j["tour"] = nullptr;
    j["uses_only_original_roads"] = result.uses_only_original_roads;
    j["original_road_count"] = result.original_road_count;
    j["augmented_road_count"] = result.augmented_road_count;
    j["attempts_used"] = result.attempts_used;
    return j.dump();
}

std::optional<Tour> brute_force_hc(const Instance& inst) {
    const int n = inst.n_cities();
    if (n > brute_force_max_cities)
        throw Error("brute_force_hc refuses more than " +
                    std::to_string(brute_force_max_cities) + " cities");

    // Cities 1..n-1 map to bits 0..m-1; paths start and end at city 0.
    const int m = n - 1;
    const std::size_t masks = std::size_t{1} << m;
    // reach[mask] = endpoint set: bit v set iff a path 0 -> ... -> v+1
    // visiting exactly the cities of mask exists.
    std::vector<std::uint16_t> reach(masks, 0);

    for (int v = 0; v < m; ++v)
        if (inst.contains(0, v + 1))
            reach[std::size_t{1} << v] = static_cast<std::uint16_t>(1u << v);

    for (std::size_t mask = 1; mask < masks; ++mask) {
        const std::uint16_t ends = reach[mask];
        if (!ends) continue;
        for (int v = 0; v < m; ++v) {
            if (!((ends >> v) & 1)) continue;
            for (int u = 0; u < m; ++u) {
                if ((mask >> u) & 1) continue;
                if (inst.contains(v + 1, u + 1))
                    reach[mask | (std::size_t{1} << u)] |=
                        static_cast<std::uint16_t>(1u << u);
            }
        }
    }

    const std::size_t full = masks - 1;
    int last = -1;
    for (int v = 0; v < m; ++v) {
        if (((reach[full] >> v) & 1) && inst.contains(v + 1, 0)) {
            last = v;
            break;
        }
    }
    if (last < 0) return std::nullopt;

    // Walk the DP backwards to recover one witness path.
    std::vector<int> path;  // cities n-1 .. 1 of the tour, in reverse
    std::size_t mask = full;
    int cur = last;
    while (true) {
        path.push_back(cur + 1);
        const std::size_t prev_mask = mask & ~(std::size_t{1} << cur);
        if (prev_mask == 0) break;
        for (int u = 0; u < m; ++u) {
            if (((reach[prev_mask] >> u) & 1) && inst.contains(u + 1, cur + 1)) {
                mask = prev_mask;
                cur = u;
                break;
            }
        }
    }

    Tour tour;
    tour.order.reserve(static_cast<std::size_t>(n));
    tour.order.push_back(0);
    tour.order.insert(tour.order.end(), path.rbegin(), path.rend());
    return tour;
}

}  // namespace hcanneal
