#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace granulyzer {

// Median with the even-count convention "mean of the two middle values".
inline double median(std::vector<double> v) {
    if (v.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
        return v[n / 2];
    }
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace granulyzer
