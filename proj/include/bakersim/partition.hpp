#pragma once

// Set partitions of {0, ..., n-1} as restricted growth strings: a[0] = 0 and
// a[i] <= 1 + max(a[0..i-1]). Element i belongs to block a[i].

#include <cstdint>
#include <vector>

namespace bakersim {

class RestrictedGrowthEnumerator {
public:
    /// n >= 1. Starts at the all-zero string (a single block).
    explicit RestrictedGrowthEnumerator(int n);

    const std::vector<int>& current() const { return a_; }
    int blocks() const;
    /// Advances in lexicographic order; false once every string was visited.
    bool next();

private:
    std::vector<int> a_;
    std::vector<int> prefix_max_;  // max(a[0..i]) for each i
};

std::vector<std::vector<int>> all_set_partitions(int n);

/// Bell numbers for n <= 25.
std::uint64_t bell_number(int n);

}  // namespace bakersim
