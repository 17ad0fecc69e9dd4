#include "bakersim/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace bakersim {

RestrictedGrowthEnumerator::RestrictedGrowthEnumerator(int n) {
    if (n < 1) throw std::invalid_argument("RestrictedGrowthEnumerator: n must be >= 1");
    a_.assign(static_cast<std::size_t>(n), 0);
    prefix_max_.assign(static_cast<std::size_t>(n), 0);
}

int RestrictedGrowthEnumerator::blocks() const { return prefix_max_.back() + 1; }

bool RestrictedGrowthEnumerator::next() {
    const int n = static_cast<int>(a_.size());
    // Rightmost position that can still grow; position 0 is pinned to 0.
    int i = n - 1;
    while (i > 0 && a_[static_cast<std::size_t>(i)] > prefix_max_[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return false;
    ++a_[static_cast<std::size_t>(i)];
    prefix_max_[static_cast<std::size_t>(i)] =
        std::max(prefix_max_[static_cast<std::size_t>(i - 1)], a_[static_cast<std::size_t>(i)]);
    for (int k = i + 1; k < n; ++k) {
        a_[static_cast<std::size_t>(k)] = 0;
        prefix_max_[static_cast<std::size_t>(k)] = prefix_max_[static_cast<std::size_t>(k - 1)];
    }
    return true;
}

std::vector<std::vector<int>> all_set_partitions(int n) {
    std::vector<std::vector<int>> out;
    RestrictedGrowthEnumerator e(n);
    do {
        out.push_back(e.current());
    } while (e.next());
    return out;
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > 25) throw std::invalid_argument("bell_number: n out of range");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int k = 0; k < n; ++k) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

}  // namespace bakersim
