#pragma once

#include <vector>

#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// Unordered split {1..2g+2} = I0 u J0 into two (g+1)-sets, canonicalized
/// by 2g+2 in J0. Indices are 1-based branch-point positions in the sorted
/// order.
struct Partition {
    std::vector<int> i0;  // sorted, subset of 1..2g+1, size g+1
    std::vector<int> j0;  // sorted complement, contains 2g+2

    int genus() const { return static_cast<int>(i0.size()) - 1; }
};

/// Canonical partition for a given I0 (validates and fills the complement).
Partition make_partition(int g, std::vector<int> i0);

/// All C(2g+1, g) canonical partitions in lexicographic I0 order. 1 <= g <= 8.
std::vector<Partition> enumerate_partitions(int g);

}  // namespace hyperkappa
