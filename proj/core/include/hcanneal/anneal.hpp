#pragma once

#include <cstdint>
#include <string>

#include "hcanneal/instance.hpp"
#include "hcanneal/rng.hpp"
#include "hcanneal/tour.hpp"

namespace hcanneal {

// Annealing-schedule knobs: t0 the initial temperature, fc the geometric
// cooling factor, na the number of annealing steps, moves_mult the
// proposals-per-step multiplier (proposals per step = round(moves_mult *
// N^2)), k the Boltzmann-like constant of the acceptance rule.
//
// The defaults were calibrated on planted instances at N = 150: the planted
// threshold needs a slow pass through the critical temperature band plus a
// long frozen tail, where zero-delta transports do the final repairs. Swaps
// help mixing early but contribute little near the end, hence the low
// swap share. Segment caps below floor(N/2) cripple the search.
struct AnnealParams {
    double t0 = 0.5;
    double fc = 0.9985;
    int na = 9000;
    double moves_mult = 1.0;
    double k = 0.4;
    double swap_prob = 0.05;  // probability a proposal is a swap, else transport
    int max_segment = 0;      // transport segment cap; 0 = floor(N/2)
    std::uint64_t seed = 0;

    void validate(int n_cities) const;       // throws Error on bad ranges
    int moves_per_step(int n_cities) const;  // round(moves_mult * N^2), >= 1
    int segment_cap(int n_cities) const;     // min(max_segment or N/2, N-2)
};

struct TrialResult {
    bool found = false;
    Tour tour;            // final tour
    int final_length = 0;
    int steps_used = 0;   // annealing steps entered; 0 if the start tour already solved
    std::int64_t moves_proposed = 0;
    std::int64_t moves_accepted = 0;
};

// One JSON object with stable keys: found, final_length, steps_used,
// moves_proposed, moves_accepted, tour.
std::string to_json(const TrialResult& result);

enum class MoveKind { swap, transport };

// A proposed move plus its exact length change. For swap, pos_a/pos_b are
// the two tour positions to exchange. For transport, pos_a is the segment
// start, seg_len its length, and pos_b the position after which the segment
// is re-inserted (always outside the segment and never the no-op slot).
struct MoveDelta {
    MoveKind kind = MoveKind::swap;
    int delta = 0;
    int pos_a = 0;
    int pos_b = 0;
    int seg_len = 1;
};

// Number of consecutive tour pairs (wraparound included) with no road.
// 0 iff the tour is a Hamiltonian cycle.
int tour_length(const Instance& inst, const Tour& tour);

// Swap/transport move descriptors for explicit positions, with the length
// change computed from the affected road slots only (at most 4 around a
// swap, duplicates counted once; exactly 3 broken plus 3 created for a
// transport). Neither mutates the tour.
MoveDelta make_swap(const Instance& inst, const Tour& tour, int pos_a, int pos_b);
MoveDelta make_transport(const Instance& inst, const Tour& tour, int start,
                         int seg_len, int dest);

// Uniform random swap of two distinct positions.
MoveDelta propose_swap(const Instance& inst, const Tour& tour, Rng& rng);

// Uniform random transport: segment length 1..min(max_segment, N-2), uniform
// start, uniform insertion point outside the segment (the no-op spot is not
// part of the draw). Internal segment order is preserved; there is no
// reversal move, since a directed road cannot be traversed backwards.
// max_segment 0 = floor(N/2).
MoveDelta propose_transport(const Instance& inst, const Tour& tour, Rng& rng,
                            int max_segment = 0);

// Applies a move in place; validates the move fields against the tour size.
void apply_move(Tour& tour, const MoveDelta& move);

// delta <= 0 is always accepted; otherwise accepted with probability
// exp(-delta / (k * temperature)). Throws unless temperature > 0 and k > 0.
bool metropolis_accept(int delta, double temperature, double k, Rng& rng);

// T_i = t0 * fc^i, closed form.
double temperature_at(double t0, double fc, int step);

// A full annealing run from a uniformly random start tour: geometric cooling
// over at most na steps, round(moves_mult * N^2) proposals per step, current
// length maintained incrementally, returning the moment the length reaches
// zero. Deterministic for a fixed params.seed.
TrialResult anneal(const Instance& inst, const AnnealParams& params);

// Independent Hamiltonian-cycle check (does not share tour_length's code
// path): full permutation test plus membership of every consecutive edge.
bool verify_hc(const Instance& inst, const Tour& tour);

}  // namespace hcanneal
