#pragma once

#include <cstdint>
#include <span>

namespace newspop {

// Quantile level k and the fitted popularity threshold delta separating the
// low and high classes.
struct LabelPolicy {
    double k = 0.5;
    std::int64_t delta = 0;
};

// delta = nearest-rank empirical quantile of the training popularities: the
// smallest value v with |{x : x <= v}| / n >= k. Throws on an empty list or
// k outside (0, 1).
LabelPolicy fit_threshold(std::span<const std::int64_t> training_popularities, double k);

// 1 (high) iff popularity > delta; ties go to the low class.
inline int label(std::int64_t popularity, const LabelPolicy& policy) {
    return popularity > policy.delta ? 1 : 0;
}

}  // namespace newspop
