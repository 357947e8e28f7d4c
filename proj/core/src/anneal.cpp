#include "hcanneal/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "json.hpp"

namespace hcanneal {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_sizes(const Instance& inst, const Tour& tour) {
    if (tour.size() != inst.n_cities())
        throw Error("tour size does not match the instance city count");
}

int prev_pos(int i, int n) { return i == 0 ? n - 1 : i - 1; }
int next_pos(int i, int n) { return i + 1 == n ? 0 : i + 1; }

// Length change of swapping positions p and q: only the road slots adjacent
// to p and q can change, and cyclically-adjacent positions share slots, so
// the distinct left endpoints of the affected slots are collected first.
int swap_delta(const Instance& inst, const std::vector<int>& order, int p, int q) {
    const int n = static_cast<int>(order.size());
    int lefts[4];
    int count = 0;
    const auto push_unique = [&](int i) {
        for (int j = 0; j < count; ++j)
            if (lefts[j] == i) return;
        lefts[count++] = i;
    };
    push_unique(prev_pos(p, n));
    push_unique(p);
    push_unique(prev_pos(q, n));
    push_unique(q);

    const auto swapped = [&](int i) {
        if (i == p) return order[static_cast<std::size_t>(q)];
        if (i == q) return order[static_cast<std::size_t>(p)];
        return order[static_cast<std::size_t>(i)];
    };

    int delta = 0;
    for (int j = 0; j < count; ++j) {
        const int i = lefts[j];
        const int k = next_pos(i, n);
        delta -= !inst.contains(order[static_cast<std::size_t>(i)],
                                order[static_cast<std::size_t>(k)]);
        delta += !inst.contains(swapped(i), swapped(k));
    }
    return delta;
}

// Length change of relocating the segment [start, start+len) to just after
// position dest: exactly three roads break (into the head, out of the tail,
// at the insertion slot) and three are created.
int transport_delta(const Instance& inst, const std::vector<int>& order,
                    int start, int len, int dest) {
    const int n = static_cast<int>(order.size());
    const int before = order[static_cast<std::size_t>(prev_pos(start, n))];
    const int head = order[static_cast<std::size_t>(start)];
    const int tail = order[static_cast<std::size_t>((start + len - 1) % n)];
    const int after = order[static_cast<std::size_t>((start + len) % n)];
    const int at = order[static_cast<std::size_t>(dest)];
    const int at_next = order[static_cast<std::size_t>(next_pos(dest, n))];

    int delta = 0;
    delta -= !inst.contains(before, head);
    delta -= !inst.contains(tail, after);
    delta -= !inst.contains(at, at_next);
    delta += !inst.contains(before, after);
    delta += !inst.contains(at, head);
    delta += !inst.contains(tail, at_next);
    return delta;
}

// Offset of dest within the walk over non-segment positions that starts just
// past the segment end. Valid transports have it in [0, n - len - 2]; the
// last outside position (start - 1) is the no-op insertion slot.
int dest_offset(int start, int len, int dest, int n) {
    return ((dest - start - len) % n + n) % n;
}

void rebuild_after_transport(const std::vector<int>& order, int start, int len,
                             int dest, std::vector<int>& out) {
    const int n = static_cast<int>(order.size());
    const int first_out = (start + len) % n;
    const int j = dest_offset(start, len, dest, n);
    out.clear();
    for (int i = 0; i <= j; ++i)
        out.push_back(order[static_cast<std::size_t>((first_out + i) % n)]);
    for (int i = 0; i < len; ++i)
        out.push_back(order[static_cast<std::size_t>((start + i) % n)]);
    for (int i = j + 1; i < n - len; ++i)
        out.push_back(order[static_cast<std::size_t>((first_out + i) % n)]);
}

void validate_move(const Tour& tour, const MoveDelta& move) {
    const int n = tour.size();
    if (move.kind == MoveKind::swap) {
        if (move.pos_a < 0 || move.pos_a >= n || move.pos_b < 0 || move.pos_b >= n)
            throw Error("swap position out of range");
        if (move.pos_a == move.pos_b) throw Error("swap positions must differ");
    } else {
        if (move.pos_a < 0 || move.pos_a >= n || move.pos_b < 0 || move.pos_b >= n)
            throw Error("transport position out of range");
        if (move.seg_len < 1 || move.seg_len > n - 2)
            throw Error("transport segment length must be in [1, N-2]");
        const int j = dest_offset(move.pos_a, move.seg_len, move.pos_b, n);
        if (j > n - move.seg_len - 2)
            throw Error("transport destination inside the segment or a no-op slot");
    }
}

Tour random_tour(int n, Rng& rng) {
    Tour t;
    t.order.resize(static_cast<std::size_t>(n));
    std::iota(t.order.begin(), t.order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(t.order[static_cast<std::size_t>(i)],
                  t.order[static_cast<std::size_t>(rng.below(i + 1))]);
    return t;
}

}  // namespace

void AnnealParams::validate(int n_cities) const {
    if (!(t0 > 0.0)) throw Error("t0 must be positive");
    if (!(fc > 0.0 && fc < 1.0)) throw Error("fc must lie in (0, 1)");
    if (na < 1) throw Error("na must be at least 1");
    if (!(moves_mult > 0.0)) throw Error("moves_mult must be positive");
    if (!(k > 0.0)) throw Error("k must be positive");
    if (!(swap_prob >= 0.0 && swap_prob <= 1.0))
        throw Error("swap_prob must lie in [0, 1]");
    if (max_segment < 0) throw Error("max_segment must be nonnegative");
    if (n_cities < 3) throw Error("anneal needs at least 3 cities");
}

int AnnealParams::moves_per_step(int n_cities) const {
    const double raw = moves_mult * static_cast<double>(n_cities) *
                       static_cast<double>(n_cities);
    if (raw > 2.0e9) throw Error("moves_mult * N^2 exceeds the per-step budget limit");
    const auto rounded = static_cast<std::int64_t>(std::llround(raw));
    return static_cast<int>(rounded < 1 ? 1 : rounded);
}

int AnnealParams::segment_cap(int n_cities) const {
    const int base = max_segment == 0 ? n_cities / 2 : max_segment;
    const int cap = std::min(base, n_cities - 2);
    return cap < 1 ? 1 : cap;
}

int tour_length(const Instance& inst, const Tour& tour) {
    check_sizes(inst, tour);
    const int n = inst.n_cities();
    int misses = 0;
    for (int i = 0; i < n; ++i) {
        const int u = tour.order[static_cast<std::size_t>(i)];
        const int v = tour.order[static_cast<std::size_t>(i + 1 == n ? 0 : i + 1)];
        misses += !inst.contains(u, v);
    }
    return misses;
}

MoveDelta make_swap(const Instance& inst, const Tour& tour, int pos_a, int pos_b) {
    check_sizes(inst, tour);
    MoveDelta move;
    move.kind = MoveKind::swap;
    move.pos_a = pos_a;
    move.pos_b = pos_b;
    validate_move(tour, move);
    move.delta = swap_delta(inst, tour.order, pos_a, pos_b);
    return move;
}

MoveDelta make_transport(const Instance& inst, const Tour& tour, int start,
                         int seg_len, int dest) {
    check_sizes(inst, tour);
    MoveDelta move;
    move.kind = MoveKind::transport;
    move.pos_a = start;
    move.pos_b = dest;
    move.seg_len = seg_len;
    validate_move(tour, move);
    move.delta = transport_delta(inst, tour.order, start, seg_len, dest);
    return move;
}

MoveDelta propose_swap(const Instance& inst, const Tour& tour, Rng& rng) {
    check_sizes(inst, tour);
    const int n = tour.size();
    const int p = rng.below(n);
    int q = rng.below(n - 1);
    if (q >= p) ++q;

    MoveDelta move;
    move.kind = MoveKind::swap;
    move.pos_a = p;
    move.pos_b = q;
    move.delta = swap_delta(inst, tour.order, p, q);
    return move;
}

MoveDelta propose_transport(const Instance& inst, const Tour& tour, Rng& rng,
                            int max_segment) {
    check_sizes(inst, tour);
    const int n = tour.size();
    if (n < 4) throw Error("transport needs at least 4 cities");
    int cap = max_segment <= 0 ? n / 2 : max_segment;
    cap = std::min(cap, n - 2);

    const int len = 1 + rng.below(cap);
    const int start = rng.below(n);
    // n - len - 1 legal insertion slots: every position outside the segment
    // except start - 1, which would re-insert the segment where it was.
    const int offset = rng.below(n - len - 1);
    const int dest = (start + len + offset) % n;

    MoveDelta move;
    move.kind = MoveKind::transport;
    move.pos_a = start;
    move.pos_b = dest;
    move.seg_len = len;
    move.delta = transport_delta(inst, tour.order, start, len, dest);
    return move;
}

void apply_move(Tour& tour, const MoveDelta& move) {
    validate_move(tour, move);
    if (move.kind == MoveKind::swap) {
        std::swap(tour.order[static_cast<std::size_t>(move.pos_a)],
                  tour.order[static_cast<std::size_t>(move.pos_b)]);
        return;
    }
    std::vector<int> next;
    next.reserve(tour.order.size());
    rebuild_after_transport(tour.order, move.pos_a, move.seg_len, move.pos_b, next);
    tour.order = std::move(next);
}

bool metropolis_accept(int delta, double temperature, double k, Rng& rng) {
    if (!(temperature > 0.0)) throw Error("metropolis temperature must be positive");
    if (!(k > 0.0)) throw Error("metropolis k must be positive");
    if (delta <= 0) return true;
    return rng.real01() < std::exp(-static_cast<double>(delta) / (k * temperature));
}

double temperature_at(double t0, double fc, int step) {
    return t0 * std::pow(fc, static_cast<double>(step));
}

TrialResult anneal(const Instance& inst, const AnnealParams& params) {
    const int n = inst.n_cities();
    params.validate(n);

    Rng rng(params.seed);
    Tour tour = random_tour(n, rng);
    int length = tour_length(inst, tour);

    TrialResult res;
    if (length == 0) {
        res.found = true;
        res.tour = std::move(tour);
        return res;
    }

    const int moves = params.moves_per_step(n);
    const int cap = params.segment_cap(n);
    const bool transport_possible = n >= 4;  // N = 3 has no legal transport
    std::vector<int> scratch;
    scratch.reserve(static_cast<std::size_t>(n));

    // |delta| never exceeds 4 (a swap touches at most four road slots).
    double uphill_prob[5];

    for (int step = 0; step < params.na; ++step) {
        const double t = temperature_at(params.t0, params.fc, step);
        for (int d = 1; d <= 4; ++d)
            uphill_prob[d] = std::exp(-static_cast<double>(d) / (params.k * t));
        res.steps_used = step + 1;
        for (int i = 0; i < moves; ++i) {
            const bool do_swap =
                !transport_possible || rng.bernoulli(params.swap_prob);
            MoveDelta move;
            if (do_swap) {
                const int p = rng.below(n);
                int q = rng.below(n - 1);
                if (q >= p) ++q;
                move.kind = MoveKind::swap;
                move.pos_a = p;
                move.pos_b = q;
                move.delta = swap_delta(inst, tour.order, p, q);
            } else {
                const int len = 1 + rng.below(cap);
                const int start = rng.below(n);
                const int offset = rng.below(n - len - 1);
                move.kind = MoveKind::transport;
                move.pos_a = start;
                move.pos_b = (start + len + offset) % n;
                move.seg_len = len;
                move.delta = transport_delta(inst, tour.order, start, len, move.pos_b);
            }
            ++res.moves_proposed;
            // Metropolis rule with the step's acceptance probabilities
            // precomputed; decisions and randomness match metropolis_accept
            // exactly (u is drawn for every uphill proposal).
            if (move.delta > 0 && !(rng.real01() < uphill_prob[move.delta])) continue;
            ++res.moves_accepted;
            if (move.kind == MoveKind::swap) {
                std::swap(tour.order[static_cast<std::size_t>(move.pos_a)],
                          tour.order[static_cast<std::size_t>(move.pos_b)]);
            } else {
                rebuild_after_transport(tour.order, move.pos_a, move.seg_len,
                                        move.pos_b, scratch);
                tour.order.swap(scratch);
            }
            length += move.delta;
            if (length == 0) {
                res.found = true;
                res.tour = std::move(tour);
                return res;
            }
        }
    }

    res.final_length = length;
    res.tour = std::move(tour);
    return res;
}

bool verify_hc(const Instance& inst, const Tour& tour) {
    check_sizes(inst, tour);
    const int n = inst.n_cities();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int c : tour.order) {
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) return false;
        seen[static_cast<std::size_t>(c)] = 1;
    }
    for (int i = 0; i < n; ++i) {
        const int u = tour.order[static_cast<std::size_t>(i)];
        const int v = tour.order[static_cast<std::size_t>(i + 1 == n ? 0 : i + 1)];
        if (!inst.has_edge(u, v)) return false;
    }
    return true;
}

std::string to_json(const TrialResult& result) {
    ordered_json j;
    j["found"] = result.found;
    j["final_length"] = result.final_length;
    j["steps_used"] = result.steps_used;
    j["moves_proposed"] = result.moves_proposed;
    j["moves_accepted"] = result.moves_accepted;
    j["tour"] = result.tour.order;
    return j.dump();
}

}  // namespace hcanneal
