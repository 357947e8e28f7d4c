#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hcanneal/errors.hpp"
#include "hcanneal/tour.hpp"

namespace hcanneal {

enum class GenKind {
    random_planted,
    random_unplanted,
    stride_planted,
    stride_unplanted,
};

const char* to_string(GenKind kind);
std::optional<GenKind> parse_gen_kind(std::string_view name);

// Everything a generator needs: which generator, the city count, the road
// multiplier (roads = m * N * ln N) and a seed.
struct GeneratorSpec {
    GenKind kind = GenKind::random_planted;
    int n_cities = 0;
    double m = 0.0;
    std::uint64_t seed = 0;
};

// Where an instance came from; carried along for audit output only.
struct Provenance {
    std::string kind = "unknown";  // generator name or "file"
    int n_cities = 0;
    double m = 0.0;
    std::uint64_t seed = 0;
    bool augmented = false;
    int augment_target = 0;
    std::uint64_t augment_seed = 0;

    std::string describe() const;
};

// An immutable directed-graph HCP instance: N cities, a duplicate-free set
// of directed roads (no self-loops), optionally a planted Hamiltonian cycle.
// Membership is O(1) via a packed adjacency bitmap; the road list keeps
// insertion order, which is also the serialization order. Instances never
// change after construction and are safe to share across threads.
class Instance {
public:
    // Dense-bitmap guard (~50 MB at the cap); generated instances are far
    // smaller since the road count grows like N ln N.
    static constexpr int max_cities = 20000;

    // Validates every invariant: 3 <= N <= max_cities, ids in range, no
    // self-loops, no duplicates, R <= N^2 - N, and a planted cycle (if any)
    // that is a permutation whose edges are all present.
    static Instance create(int n_cities, std::vector<std::pair<int, int>> roads,
                           std::optional<Tour> planted, Provenance provenance);

    int n_cities() const { return n_; }
    int num_roads() const { return static_cast<int>(roads_.size()); }
    const std::vector<std::pair<int, int>>& roads() const { return roads_; }
    const std::optional<Tour>& planted_cycle() const { return planted_; }
    const Provenance& provenance() const { return prov_; }

    // Directed membership test; throws on out-of-range ids. has_edge(u, v)
    // says nothing about (v, u).
    bool has_edge(int u, int v) const;

    // Unchecked membership for hot loops; u and v must be valid city ids.
    bool contains(int u, int v) const noexcept {
        const std::size_t idx =
            static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
            static_cast<std::size_t>(v);
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }

private:
    Instance() = default;

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::pair<int, int>> roads_;
    std::optional<Tour> planted_;
    Provenance prov_;
};

// Road quota m * n * ln(n), rounded half-up. Throws InfeasibleError when the
// result exceeds the density bound n^2 - n.
int road_count(double m, int n);

// Uniformly random cyclic tour of 0..n-1 (Fisher-Yates); deterministic per
// seed.
Tour random_cycle(int n, std::uint64_t seed);

// Random instance (spec.kind picks planted or not). Planted: the cycle's N
// edges go in first and count toward the quota; the remainder are distinct
// uniform ordered pairs by rejection sampling.
Instance gen_random(const GeneratorSpec& spec);

// Deterministic stride-pattern instance: for stride s = 1, 2, 3, ... emit
// a -> a+s for a = 0, s+1, 2(s+1), ... while a+s <= N-1, skipping edges
// already present, until the quota is met. Planted variants insert a random
// cycle first (counted toward the quota). Without a planted cycle every edge
// points forward, so the graph is acyclic and contains no Hamiltonian cycle
// by construction. Throws InfeasibleError when all strides are exhausted
// before the quota is reached.
Instance gen_stride(const GeneratorSpec& spec);

// Dispatch on spec.kind.
Instance generate(const GeneratorSpec& spec);

// Superset copy of inst with distinct random roads added until target_roads;
// an unchanged copy when inst already has at least that many. Existing
// roads, the planted cycle and provenance are preserved; actual augmentation
// is recorded in the provenance.
Instance augment(const Instance& inst, int target_roads, std::uint64_t seed);

// Line-oriented instance file:
//   hcp <N> <R>
//   planted <c0> <c1> ... <cN-1>     (optional)
//   <u> <v>                          (R road lines, insertion order)
// write/read round-trip byte-identically, provenance excepted.
void write_instance(const Instance& inst, std::ostream& out);
Instance read_instance(std::istream& in);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace hcanneal
