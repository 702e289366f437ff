#pragma once

// Compensated summation helpers shared by counting and statistics.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace fraccite {

// Neumaier-compensated sum; deterministic for a fixed input order.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double x : values) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

// Sorted-ascending compensated sum: invariant under permutation of the
// input multiset.
inline double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return compensated_sum(values);
}

}  // namespace fraccite
