#include "newspop/labeling.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace newspop {

LabelPolicy fit_threshold(std::span<const std::int64_t> training_popularities, double k) {
    if (training_popularities.empty())
        throw std::invalid_argument("fit_threshold: empty training popularities");
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("fit_threshold: k must be in (0,1)");
    std::vector<std::int64_t> sorted(training_popularities.begin(), training_popularities.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    // smallest 1-based rank r with r/n >= k; sorted[r-1] is then the smallest
    // value whose empirical CDF reaches k
    std::size_t lo = 1, hi = n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(mid) / static_cast<double>(n) >= k)
            hi = mid;
        else
            lo = mid + 1;
    }
    return LabelPolicy{k, sorted[lo - 1]};
}

}  // namespace newspop
