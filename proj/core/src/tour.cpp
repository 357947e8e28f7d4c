#include "hcanneal/tour.hpp"

#include <algorithm>

#include "hcanneal/errors.hpp"

namespace hcanneal {

bool is_permutation_of(const Tour& t, int n) {
    if (t.size() != n) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int c : t.order) {
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) return false;
        seen[static_cast<std::size_t>(c)] = 1;
    }
    return true;
}

Tour canonical_form(const Tour& t) {
    const auto it = std::find(t.order.begin(), t.order.end(), 0);
    if (it == t.order.end()) throw Error("canonical_form: tour does not contain city 0");
    Tour out;
    out.order.reserve(t.order.size());
    out.order.insert(out.order.end(), it, t.order.end());
    out.order.insert(out.order.end(), t.order.begin(), it);
    return out;
}

}  // namespace hcanneal
