#pragma once

#include <span>
#include <vector>

#include "newspop/linalg.hpp"

namespace newspop {

struct TrainConfig {
    double C = 1.0;
    double tolerance = 1e-6;  // gradient infinity-norm stop
    int max_iterations = 5000;
    bool fit_intercept = true;
};

// min_w 1/2 w.w + C sum log(1 + exp(-y_i w.x_i)), y in {-1,+1}. The last
// `unpenalized_tail` coordinates of w (the intercept, when present) are
// excluded from the penalty.
struct LogisticProblem {
    const Matrix& X;
    std::span<const double> y;
    double C = 1.0;
    int unpenalized_tail = 0;

    double objective(std::span<const double> w) const;
    std::vector<double> gradient(std::span<const double> w) const;
};

// z-score statistics fitted on the training matrix (population variance, so
// duplicating the training set leaves them unchanged). Zero-variance columns
// keep scale 1 and are centered only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& X);
    Matrix transform(const Matrix& X) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;
};

struct TrainedModel {
    std::vector<double> w;  // standardized dims, intercept last when fitted
    Standardizer standardizer;
    bool fit_intercept = true;
    TrainConfig config;

    bool single_class_warning = false;
    int iterations = 0;
    double final_grad_inf_norm = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // objective after each accepted step

    double margin(std::span<const double> x_raw) const;
    double predict_proba(std::span<const double> x_raw) const;  // P(label = 1)
    int predict(std::span<const double> x_raw) const { return predict_proba(x_raw) >= 0.5 ? 1 : 0; }
};

// Labels are {0,1}; internally mapped to {-1,+1}. Deterministic full-batch
// gradient descent with Armijo backtracking (Barzilai-Borwein trial steps).
TrainedModel train(const Matrix& X_raw, std::span<const int> labels, const TrainConfig& config);

}  // namespace newspop
