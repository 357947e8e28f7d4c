#include "hcanneal/instance.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hcanneal/rng.hpp"

namespace hcanneal {

namespace {

// Packed n x n membership bits used while sampling roads.
class BitGrid {
public:
    explicit BitGrid(int n)
        : n_(static_cast<std::size_t>(n)),
          bits_((n_ * n_ + 63) / 64, 0) {}

    bool test(int u, int v) const {
        const std::size_t idx = static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }
    void set(int u, int v) {
        const std::size_t idx = static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
        bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    }

private:
    std::size_t n_;
    std::vector<std::uint64_t> bits_;
};

Tour shuffled_identity(int n, Rng& rng) {
    Tour t;
    t.order.resize(static_cast<std::size_t>(n));
    std::iota(t.order.begin(), t.order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(t.order[static_cast<std::size_t>(i)],
                  t.order[static_cast<std::size_t>(rng.below(i + 1))]);
    return t;
}

void append_cycle_edges(const Tour& cycle, std::vector<std::pair<int, int>>& roads,
                        BitGrid& grid) {
    const int n = cycle.size();
    for (int i = 0; i < n; ++i) {
        const int u = cycle.order[static_cast<std::size_t>(i)];
        const int v = cycle.order[static_cast<std::size_t>(i + 1 == n ? 0 : i + 1)];
        roads.emplace_back(u, v);
        grid.set(u, v);
    }
}

// Distinct uniform ordered pairs by rejection until `roads` holds `target`
// entries. Exact and fast in the sparse regime R ~ m N ln N << N^2.
void sample_extra_roads(int n, int target, Rng& rng,
                        std::vector<std::pair<int, int>>& roads, BitGrid& grid) {
    while (static_cast<int>(roads.size()) < target) {
        const int u = rng.below(n);
        const int v = rng.below(n);
        if (u == v || grid.test(u, v)) continue;
        roads.emplace_back(u, v);
        grid.set(u, v);
    }
}

Provenance provenance_for(const GeneratorSpec& spec) {
    Provenance p;
    p.kind = to_string(spec.kind);
    p.n_cities = spec.n_cities;
    p.m = spec.m;
    p.seed = spec.seed;
    return p;
}

bool is_planted(GenKind kind) {
    return kind == GenKind::random_planted || kind == GenKind::stride_planted;
}

}  // namespace

const char* to_string(GenKind kind) {
    switch (kind) {
        case GenKind::random_planted: return "random-planted";
        case GenKind::random_unplanted: return "random-unplanted";
        case GenKind::stride_planted: return "stride-planted";
        case GenKind::stride_unplanted: return "stride-unplanted";
    }
    return "unknown";
}

std::optional<GenKind> parse_gen_kind(std::string_view name) {
    if (name == "random-planted") return GenKind::random_planted;
    if (name == "random-unplanted") return GenKind::random_unplanted;
    if (name == "stride-planted") return GenKind::stride_planted;
    if (name == "stride-unplanted") return GenKind::stride_unplanted;
    return std::nullopt;
}

std::string Provenance::describe() const {
    std::ostringstream out;
    out << kind;
    if (kind != "file" && kind != "unknown")
        out << " n=" << n_cities << " m=" << m << " seed=" << seed;
    if (augmented)
        out << " +augment(target=" << augment_target << " seed=" << augment_seed << ")";
    return out.str();
}

Instance Instance::create(int n_cities, std::vector<std::pair<int, int>> roads,
                          std::optional<Tour> planted, Provenance provenance) {
    if (n_cities < 3) throw Error("instance needs at least 3 cities");
    if (n_cities > max_cities)
        throw Error("instance exceeds the supported city count (" +
                    std::to_string(max_cities) + ")");
    const auto n = static_cast<std::size_t>(n_cities);
    const std::int64_t bound =
        static_cast<std::int64_t>(n_cities) * (n_cities - 1);
    if (static_cast<std::int64_t>(roads.size()) > bound)
        throw Error("road count exceeds the density bound N^2 - N");

    Instance inst;
    inst.n_ = n_cities;
    inst.bits_.assign((n * n + 63) / 64, 0);
    for (const auto& [u, v] : roads) {
        if (u < 0 || u >= n_cities || v < 0 || v >= n_cities)
            throw Error("road endpoint out of range");
        if (u == v) throw Error("self-loop road rejected");
        const std::size_t idx = static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v);
        if ((inst.bits_[idx >> 6] >> (idx & 63)) & 1u)
            throw Error("duplicate road rejected");
        inst.bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    }
    if (planted) {
        if (!is_permutation_of(*planted, n_cities))
            throw Error("planted cycle is not a permutation of the cities");
        for (int i = 0; i < n_cities; ++i) {
            const int u = planted->order[static_cast<std::size_t>(i)];
            const int v = planted->order[static_cast<std::size_t>(i + 1 == n_cities ? 0 : i + 1)];
            if (!inst.contains(u, v))
                throw Error("planted cycle edge missing from the road set");
        }
    }
    inst.roads_ = std::move(roads);
    inst.planted_ = std::move(planted);
    inst.prov_ = std::move(provenance);
    return inst;
}

bool Instance::has_edge(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw Error("has_edge: city id out of range");
    return contains(u, v);
}

int road_count(double m, int n) {
    if (!(m > 0.0)) throw Error("road multiplier m must be positive");
    if (n < 3) throw Error("road_count needs at least 3 cities");
    const double exact = m * static_cast<double>(n) * std::log(static_cast<double>(n));
    const double rounded = std::floor(exact + 0.5);  // round half-up
    const double bound = static_cast<double>(n) * (static_cast<double>(n) - 1.0);
    if (rounded > bound) {
        std::ostringstream msg;
        msg << "instance too dense: round(" << m << " * " << n << " * ln " << n
            << ") = " << rounded << " exceeds N^2 - N = " << bound;
        throw InfeasibleError(msg.str());
    }
    return static_cast<int>(rounded);
}

Tour random_cycle(int n, std::uint64_t seed) {
    if (n < 3) throw Error("random_cycle needs at least 3 cities");
    Rng rng(seed);
    return shuffled_identity(n, rng);
}

Instance gen_random(const GeneratorSpec& spec) {
    if (spec.kind != GenKind::random_planted && spec.kind != GenKind::random_unplanted)
        throw Error("gen_random requires a random-* generator kind");
    const int n = spec.n_cities;
    const int quota = road_count(spec.m, n);

    Rng rng(spec.seed);
    BitGrid grid(n);
    std::vector<std::pair<int, int>> roads;
    roads.reserve(static_cast<std::size_t>(quota));
    std::optional<Tour> planted;

    if (is_planted(spec.kind)) {
        if (quota < n)
            throw InfeasibleError("road quota " + std::to_string(quota) +
                                  " below the planted cycle size " + std::to_string(n));
        planted = shuffled_identity(n, rng);
        append_cycle_edges(*planted, roads, grid);
    }
    sample_extra_roads(n, quota, rng, roads, grid);
    return Instance::create(n, std::move(roads), std::move(planted), provenance_for(spec));
}

Instance gen_stride(const GeneratorSpec& spec) {
    if (spec.kind != GenKind::stride_planted && spec.kind != GenKind::stride_unplanted)
        throw Error("gen_stride requires a stride-* generator kind");
    const int n = spec.n_cities;
    const int quota = road_count(spec.m, n);

    BitGrid grid(n);
    std::vector<std::pair<int, int>> roads;
    roads.reserve(static_cast<std::size_t>(quota));
    std::optional<Tour> planted;

    if (is_planted(spec.kind)) {
        if (quota < n)
            throw InfeasibleError("road quota " + std::to_string(quota) +
                                  " below the planted cycle size " + std::to_string(n));
        Rng rng(spec.seed);
        planted = shuffled_identity(n, rng);
        append_cycle_edges(*planted, roads, grid);
    }

    for (int s = 1; s <= n - 1 && static_cast<int>(roads.size()) < quota; ++s) {
        for (int a = 0; a + s <= n - 1; a += s + 1) {
            if (static_cast<int>(roads.size()) == quota) break;
            if (grid.test(a, a + s)) continue;  // planted overlap
            roads.emplace_back(a, a + s);
            grid.set(a, a + s);
        }
    }
    if (static_cast<int>(roads.size()) < quota) {
        std::ostringstream msg;
        msg << "stride pattern exhausted at " << roads.size() << " roads before the quota "
            << quota << " (n = " << n << ")";
        throw InfeasibleError(msg.str());
    }
    return Instance::create(n, std::move(roads), std::move(planted), provenance_for(spec));
}

Instance generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GenKind::random_planted:
        case GenKind::random_unplanted:
            return gen_random(spec);
        case GenKind::stride_planted:
        case GenKind::stride_unplanted:
            return gen_stride(spec);
    }
    throw Error("unknown generator kind");
}

Instance augment(const Instance& inst, int target_roads, std::uint64_t seed) {
    const int n = inst.n_cities();
    const std::int64_t bound = static_cast<std::int64_t>(n) * (n - 1);
    if (target_roads > bound)
        throw InfeasibleError("augment target " + std::to_string(target_roads) +
                              " exceeds N^2 - N = " + std::to_string(bound));
    if (inst.num_roads() >= target_roads) return inst;

    BitGrid grid(n);
    std::vector<std::pair<int, int>> roads = inst.roads();
    for (const auto& [u, v] : roads) grid.set(u, v);

    Rng rng(seed);
    sample_extra_roads(n, target_roads, rng, roads, grid);

    Provenance prov = inst.provenance();
    prov.augmented = true;
    prov.augment_target = target_roads;
    prov.augment_seed = seed;
    return Instance::create(n, std::move(roads), inst.planted_cycle(), std::move(prov));
}

void write_instance(const Instance& inst, std::ostream& out) {
    out << "hcp " << inst.n_cities() << ' ' << inst.num_roads() << '\n';
    if (inst.planted_cycle()) {
        out << "planted";
        for (int c : inst.planted_cycle()->order) out << ' ' << c;
        out << '\n';
    }
    for (const auto& [u, v] : inst.roads()) out << u << ' ' << v << '\n';
}

Instance read_instance(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty instance file");
    std::istringstream header(line);
    std::string magic;
    int n = 0;
    long r = -1;
    if (!(header >> magic >> n >> r) || magic != "hcp" || (header >> std::ws, !header.eof()))
        throw ParseError("bad header line, expected 'hcp <N> <R>': " + line);
    if (n < 3) throw ParseError("instance needs at least 3 cities");
    if (r < 0) throw ParseError("negative road count");
    if (n > Instance::max_cities || r > static_cast<long>(n) * (n - 1))
        throw ParseError("instance header out of supported range");

    std::optional<Tour> planted;
    bool pending_road_line = false;
    std::string road_line;
    if (std::getline(in, line)) {
        if (line.rfind("planted", 0) == 0) {
            std::istringstream ps(line);
            std::string tag;
            ps >> tag;
            Tour t;
            t.order.reserve(static_cast<std::size_t>(n));
            int c = 0;
            while (ps >> c) t.order.push_back(c);
            if (!ps.eof()) throw ParseError("bad planted line: " + line);
            if (t.size() != n)
                throw ParseError("planted line must list exactly N cities");
            planted = std::move(t);
        } else {
            pending_road_line = true;
            road_line = line;
        }
    }

    std::vector<std::pair<int, int>> roads;
    roads.reserve(static_cast<std::size_t>(r));
    auto parse_road = [&](const std::string& text) {
        std::istringstream rs(text);
        int u = 0, v = 0;
        if (!(rs >> u >> v) || (rs >> std::ws, !rs.eof()))
            throw ParseError("bad road line, expected '<u> <v>': " + text);
        roads.emplace_back(u, v);
    };
    if (pending_road_line) parse_road(road_line);
    while (static_cast<long>(roads.size()) < r && std::getline(in, line)) parse_road(line);
    if (static_cast<long>(roads.size()) != r)
        throw ParseError("expected " + std::to_string(r) + " road lines, got " +
                         std::to_string(roads.size()));

    Provenance prov;
    prov.kind = "file";
    prov.n_cities = n;
    try {
        return Instance::create(n, std::move(roads), std::move(planted), std::move(prov));
    } catch (const Error& e) {
        throw ParseError(std::string("invalid instance: ") + e.what());
    }
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    write_instance(inst, out);
    if (!out) throw Error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file: " + path);
    return read_instance(in);
}

}  // namespace hcanneal
