#pragma once

#include <vector>

namespace hcanneal {

// A candidate solution: a permutation of the city ids 0..N-1, read
// cyclically (the city at the last position connects back to the first).
struct Tour {
    std::vector<int> order;

    int size() const { return static_cast<int>(order.size()); }
    bool operator==(const Tour&) const = default;
};

// True iff t.order is exactly a permutation of 0..n-1.
bool is_permutation_of(const Tour& t, int n);

// Rotates the cyclic order so city 0 sits at position 0. No reflection:
// direction matters in a digraph, so (0,1,2) and (0,2,1) stay distinct.
// Two tours describe the same directed cycle iff their canonical forms
// compare equal. Throws if the tour does not contain city 0.
Tour canonical_form(const Tour& t);

}  // namespace hcanneal
