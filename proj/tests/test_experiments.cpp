#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "hcanneal/experiments.hpp"
#include "hcanneal/rng.hpp"

using namespace hcanneal;

namespace {

Instance complete_digraph(int n) {
    std::vector<std::pair<int, int>> roads;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) roads.emplace_back(u, v);
    return Instance::create(n, std::move(roads), std::nullopt, {});
}

// Second exact method, independent of the Held-Karp code path: scan all
// permutations with city 0 pinned first and test each with verify_hc.
bool permutation_scan_has_hc(const Instance& inst) {
    const int n = inst.n_cities();
    Tour t;
    t.order.resize(static_cast<std::size_t>(n));
    std::iota(t.order.begin(), t.order.end(), 0);
    do {
        if (verify_hc(inst, t)) return true;
    } while (std::next_permutation(t.order.begin() + 1, t.order.end()));
    return false;
}

// A quick-to-solve planted batch configuration for harness tests.
AnnealParams fast_params() {
    AnnealParams p;
    p.na = 60;
    return p;
}

nlohmann::json rows_without_wall(const std::string& report_json) {
    auto j = nlohmann::json::parse(report_json);
    for (auto& row : j["rows"]) row.erase("mean_wall_ms");
    j.erase("jobs");  // worker count is metadata, not part of the result
    return j;
}

}  // namespace

TEST_CASE("brute_force_hc answers the tiny hand cases") {
    const Instance cyc = Instance::create(3, {{0, 1}, {1, 2}, {2, 0}}, std::nullopt, {});
    const auto found = brute_force_hc(cyc);
    REQUIRE(found);
    CHECK(found->order == std::vector<int>{0, 1, 2});

    // Same cities, no road back to 0: no cycle.
    const Instance dag = Instance::create(3, {{0, 1}, {1, 2}, {0, 2}}, std::nullopt, {});
    CHECK_FALSE(brute_force_hc(dag));

    CHECK(brute_force_hc(complete_digraph(8)));
    CHECK_THROWS_AS(brute_force_hc(gen_random({GenKind::random_unplanted, 15, 0.5, 1})),
                    Error);
}

TEST_CASE("brute_force_hc returns an actual Hamiltonian cycle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Instance inst = gen_random({GenKind::random_planted, 9, 0.9, seed});
        const auto found = brute_force_hc(inst);
        REQUIRE(found);
        CHECK(verify_hc(inst, *found));
    }
}

TEST_CASE("brute_force_hc agrees with an independent permutation scan") {
    // 200 random instances at N = 8 across sparse to dense quotas; the two
    // exact methods must agree on existence everywhere.
    int with_hc = 0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.3 + 0.9 * (i / 199.0);
        const Instance inst =
            gen_random({GenKind::random_unplanted, 8, m, static_cast<std::uint64_t>(i)});
        const auto held_karp = brute_force_hc(inst);
        CHECK(held_karp.has_value() == permutation_scan_has_hc(inst));
        if (held_karp) {
            CHECK(verify_hc(inst, *held_karp));
            ++with_hc;
        }
    }
    // The density span must actually cross the existence boundary, otherwise
    // the agreement check would be vacuous on one side.
    CHECK(with_hc > 0);
    CHECK(with_hc < 200);
}

TEST_CASE("stride-unplanted instances never contain a Hamiltonian cycle") {
    // All N <= 10 and every feasible quota, proved by the exact oracle.
    for (int n = 3; n <= 10; ++n) {
        int pool = 0;
        for (int s = 1; s <= n - 1; ++s) pool += n / (s + 1);
        for (int quota = 1; quota <= pool; ++quota) {
            const double m = quota / (n * std::log(static_cast<double>(n)));
            REQUIRE(road_count(m, n) == quota);
            const Instance inst = gen_stride({GenKind::stride_unplanted, n, m, 0});
            CHECK_FALSE(brute_force_hc(inst));
        }
    }
}

TEST_CASE("run_batch on the complete digraph finds one unique cycle") {
    const double m = 90.0 / (10.0 * std::log(10.0));
    const BatchResult batch =
        run_batch({GenKind::random_unplanted, 10, m, 0}, fast_params(), 1, 42);
    CHECK(batch.trials == 1);
    CHECK(batch.found_count == 1);
    CHECK(batch.unique_hc_count == 1);
    CHECK(batch.planted_found_count == 0);
    CHECK(batch.records.size() == 1);
}

TEST_CASE("run_batch counts planted rediscoveries via canonical form") {
    // Quota == N leaves only the planted cycle's edges, so every success is
    // the planted tour (possibly rotated); canonical comparison must see it.
    const double m = 1.0 / std::log(8.0);
    AnnealParams params;
    params.na = 2000;
    const BatchResult batch =
        run_batch({GenKind::random_planted, 8, m, 0}, params, 8, 7);
    CHECK(batch.found_count == 8);
    CHECK(batch.planted_found_count == batch.found_count);
    // Fresh instance per trial: eight independently drawn cycles.
    CHECK(batch.unique_hc_count == 8);
}

TEST_CASE("run_batch with a shared instance uses the generator seed as-is") {
    const GeneratorSpec gen{GenKind::random_planted, 6, 6.0 / (6.0 * std::log(6.0)), 123};
    AnnealParams params;
    params.na = 500;
    const BatchResult batch = run_batch(gen, params, 6, 9, false);
    CHECK(batch.found_count == 6);
    // One shared instance, one possible cycle: all tours identical.
    CHECK(batch.unique_hc_count == 1);
    CHECK(batch.planted_found_count == 6);
}

TEST_CASE("run_batch aggregates are independent of the job count") {
    const GeneratorSpec gen{GenKind::random_planted, 20, 1.2, 0};
    const auto sequential = run_batch(gen, fast_params(), 8, 5, true, 1);
    const auto threaded = run_batch(gen, fast_params(), 8, 5, true, 2);
    CHECK(sequential.found_count == threaded.found_count);
    CHECK(sequential.unique_hc_count == threaded.unique_hc_count);
    CHECK(sequential.planted_found_count == threaded.planted_found_count);
    CHECK(sequential.mean_steps_to_success == threaded.mean_steps_to_success);
    REQUIRE(sequential.records.size() == threaded.records.size());
    for (std::size_t i = 0; i < sequential.records.size(); ++i)
        CHECK(sequential.records[i].result.tour == threaded.records[i].result.tour);
}

TEST_CASE("every batch success passes verify_hc") {
    const BatchResult batch =
        run_batch({GenKind::random_planted, 15, 1.0, 3}, fast_params(), 10, 21);
    int checked = 0;
    for (const auto& rec : batch.records) {
        if (!rec.result.found) continue;
        CHECK(rec.result.final_length == 0);
        ++checked;
    }
    CHECK(checked == batch.found_count);
    CHECK(batch.found_count > 0);
}

TEST_CASE("sweep validates its spec") {
    SweepSpec spec;
    spec.generator = {GenKind::random_planted, 10, 1.0, 0};
    spec.trials = 2;
    spec.values = {};
    CHECK_THROWS_AS(sweep(spec), Error);
    spec.values = {0.5, 0.5};
    CHECK_THROWS_AS(sweep(spec), Error);
    spec.values = {0.7, 0.5};
    CHECK_THROWS_AS(sweep(spec), Error);
    spec.values = {0.5};
    spec.trials = 0;
    CHECK_THROWS_AS(sweep(spec), Error);
    spec.trials = 2;
    spec.swept = SweptParam::n;
    spec.values = {10.5};
    CHECK_THROWS_AS(sweep(spec), Error);
}

TEST_CASE("a degenerate sweep row matches its run_batch") {
    SweepSpec spec;
    spec.generator = {GenKind::random_planted, 12, 0.0, 0};
    spec.swept = SweptParam::m;
    spec.values = {1.1};
    spec.trials = 1;
    spec.params = fast_params();
    spec.master_seed = 31;
    const SweepReport report = sweep(spec);
    REQUIRE(report.rows.size() == 1);

    const BatchResult batch = run_batch({GenKind::random_planted, 12, 1.1, 0},
                                        fast_params(), 1, derive_seed(31, 0, 0));
    CHECK(report.rows[0].found_count == batch.found_count);
    CHECK(report.rows[0].unique_hc_count == batch.unique_hc_count);
    CHECK(report.rows[0].trials == 1);
    CHECK(report.rows[0].value == 1.1);
}

TEST_CASE("sweep reports are deterministic apart from wall time") {
    SweepSpec spec;
    spec.generator = {GenKind::random_planted, 14, 0.0, 0};
    spec.swept = SweptParam::m;
    spec.values = {0.9, 1.2};
    spec.trials = 4;
    spec.params = fast_params();
    spec.master_seed = 8;
    spec.jobs = 2;
    const auto a = rows_without_wall(to_json(sweep(spec)));
    spec.jobs = 1;
    const auto b = rows_without_wall(to_json(sweep(spec)));
    CHECK(a == b);
}

TEST_CASE("sweep over n and over k applies the value to the right knob") {
    SweepSpec spec;
    spec.generator = {GenKind::random_planted, 0, 1.2, 0};
    spec.swept = SweptParam::n;
    spec.values = {8, 10};
    spec.trials = 2;
    spec.params = fast_params();
    const SweepReport by_n = sweep(spec);
    CHECK(by_n.rows.size() == 2);
    CHECK(by_n.rows[0].value == 8);

    spec.generator = {GenKind::random_planted, 10, 1.2, 0};
    spec.swept = SweptParam::k;
    spec.values = {0.2, 0.4};
    const SweepReport by_k = sweep(spec);
    CHECK(by_k.rows.size() == 2);
    CHECK(by_k.rows[0].trials == 2);
}

TEST_CASE("sweep CSV carries the documented header and row shape") {
    SweepSpec spec;
    spec.generator = {GenKind::random_planted, 10, 0.0, 0};
    spec.swept = SweptParam::m;
    spec.values = {1.25};
    spec.trials = 2;
    spec.params = fast_params();
    const std::string csv = to_csv(sweep(spec));
    CHECK(csv.rfind("value,trials,found,unique,planted_found,mean_steps,mean_wall_ms\n",
                    0) == 0);
    CHECK(csv.substr(csv.find('\n') + 1, 7) == "1.25,2,");
}

TEST_CASE("sweep JSON embeds the full experiment metadata") {
    SweepSpec spec;
    spec.generator = {GenKind::stride_planted, 12, 0.0, 5};
    spec.swept = SweptParam::m;
    spec.values = {1.0};
    spec.trials = 2;
    spec.params = fast_params();
    spec.master_seed = 77;
    const auto j = nlohmann::json::parse(to_json(sweep(spec)));
    CHECK(j["generator"]["kind"] == "stride-planted");
    CHECK(j["generator"]["n_cities"] == 12);
    CHECK(j["swept_parameter"] == "m");
    CHECK(j["trials"] == 2);
    CHECK(j["master_seed"] == 77);
    CHECK(j["rng"] == "mt19937_64");
    CHECK(j["params"]["k"] == 0.4);
    CHECK(j["rows"].size() == 1);
    CHECK(j["rows"][0]["found"].is_number_integer());
}

TEST_CASE("decide_hcp reports augmented-graph cycles and road provenance") {
    // A complete digraph needs no augmentation at all.
    const double m = 90.0 / (10.0 * std::log(10.0));
    const Instance complete = gen_random({GenKind::random_unplanted, 10, m, 1});
    const DecideResult yes = decide_hcp(complete, fast_params(), 2, 3);
    CHECK(yes.hc_found);
    CHECK(yes.heuristic);
    CHECK(yes.uses_only_original_roads);
    CHECK(yes.original_road_count == 90);
    CHECK(yes.augmented_road_count == 90);
    REQUIRE(yes.tour);
    CHECK(verify_hc(complete, *yes.tour));
}

TEST_CASE("decide_hcp finds planted cycles after augmentation") {
    // Sparse planted instance: m = 0.45 sits below the 0.58 target, so the
    // procedure must add roads before the cycle becomes findable.
    const Instance sparse = gen_random({GenKind::random_planted, 60, 0.45, 9});
    const int before = sparse.num_roads();
    const DecideResult verdict = decide_hcp(sparse, {}, 4, 11);
    CHECK(sparse.num_roads() == before);  // input untouched
    CHECK(verdict.hc_found);
    CHECK(verdict.augmented_road_count == road_count(0.58, 60));
    REQUIRE(verdict.tour);
    CHECK(verdict.tour->size() == 60);
}

TEST_CASE("decide_hcp matches the oracle verdict on stride instances") {
    // Stride-unplanted graphs are acyclic: the oracle proves there is no HC,
    // and across 50 seeded runs the heuristic must agree (its augmented
    // search may add roads, but at N = 10 the 0.58 quota of 13 stays far
    // below the cycle-creation regime).
    const double m = 10.0 / (10.0 * std::log(10.0));
    const Instance inst = gen_stride({GenKind::stride_unplanted, 10, m, 0});
    REQUIRE_FALSE(brute_force_hc(inst));
    AnnealParams p;
    p.na = 400;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const DecideResult verdict = decide_hcp(inst, p, 2, seed);
        CHECK_FALSE(verdict.hc_found);
        CHECK(verdict.heuristic);
        CHECK(verdict.attempts_used == 2);
    }
}

TEST_CASE("decide_hcp result serializes with the heuristic marker") {
    const Instance dag = Instance::create(3, {{0, 1}, {1, 2}, {0, 2}}, std::nullopt, {});
    AnnealParams p;
    p.na = 5;
    const DecideResult verdict = decide_hcp(dag, p, 1, 0);
    const auto j = nlohmann::json::parse(to_json(verdict));
    CHECK(j["heuristic"] == true);
    CHECK(j["hc_found"].is_boolean());
    CHECK(j["original_road_count"] == 3);
    CHECK(j["attempts_used"] == 1);
}

TEST_CASE("anneal successes at small N are confirmed by the oracle") {
    // Harness wiring for the soundness argument: whenever the annealer
    // reports a cycle, the exact oracle must also find one.
    AnnealParams p;
    p.na = 200;
    for (int i = 0; i < 40; ++i) {
        const int n = 5 + (i % 6);
        const double m = 0.3 + 0.9 * (i / 39.0);
        GeneratorSpec gen{GenKind::random_unplanted, n, m, static_cast<std::uint64_t>(i)};
        if (road_count(m, n) >= n && i % 2 == 0) gen.kind = GenKind::random_planted;
        const Instance inst = generate(gen);
        p.seed = static_cast<std::uint64_t>(i);
        const TrialResult res = anneal(inst, p);
        if (res.found) {
            CHECK(verify_hc(inst, res.tour));
            CHECK(brute_force_hc(inst).has_value());
        }
    }
}

TEST_CASE("derive_seed separates streams and indices") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 30; ++s)
        for (std::uint64_t i = 0; i < 30; ++i) seen.insert(derive_seed(9, s, i));
    CHECK(seen.size() == 900);
}
