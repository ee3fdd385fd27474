#include "newspop/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "newspop/kernels.hpp"

namespace newspop {

double LogisticProblem::objective(std::span<const double> w) const {
    const LossGrad lg = logistic_sum(X, y, w);
    double penalty = 0.0;
    const int penalized = static_cast<int>(w.size()) - unpenalized_tail;
    for (int j = 0; j < penalized; ++j) penalty += w[j] * w[j];
    return 0.5 * penalty + C * lg.loss;
}

std::vector<double> LogisticProblem::gradient(std::span<const double> w) const {
    LossGrad lg = logistic_sum(X, y, w);
    const int penalized = static_cast<int>(w.size()) - unpenalized_tail;
    for (std::size_t j = 0; j < w.size(); ++j) {
        lg.grad[j] *= C;
        if (static_cast<int>(j) < penalized) lg.grad[j] += w[j];
    }
    return lg.grad;
}

Standardizer Standardizer::fit(const Matrix& X) {
    const int n = X.rows;
    const int d = X.cols;
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    if (n == 0) return s;
    for (int i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        for (int j = 0; j < d; ++j) s.mean[j] += row[j];
    }
    for (int j = 0; j < d; ++j) s.mean[j] /= n;
    std::vector<double> var(d, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        for (int j = 0; j < d; ++j) {
            const double c = row[j] - s.mean[j];
            var[j] += c * c;
        }
    }
    for (int j = 0; j < d; ++j) {
        var[j] /= n;
        if (var[j] > 0.0) s.scale[j] = std::sqrt(var[j]);
    }
    return s;
}

Matrix Standardizer::transform(const Matrix& X) const {
    Matrix out(X.rows, X.cols);
    for (int i = 0; i < X.rows; ++i) {
        const double* in = X.row_ptr(i);
        double* o = out.row_ptr(i);
        for (int j = 0; j < X.cols; ++j) o[j] = (in[j] - mean[j]) / scale[j];
    }
    return out;
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    for (std::size_t j = 0; j < mean.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TrainedModel train(const Matrix& X_raw, std::span<const int> labels, const TrainConfig& config) {
    if (X_raw.rows == 0) throw std::invalid_argument("train: no examples");
    if (X_raw.rows != static_cast<int>(labels.size()))
        throw std::invalid_argument("train: labels/examples size mismatch");
    if (!(config.C > 0.0)) throw std::invalid_argument("train: C must be positive");

    TrainedModel model;
    model.config = config;
    model.fit_intercept = config.fit_intercept;
    model.standardizer = Standardizer::fit(X_raw);

    bool saw_pos = false, saw_neg = false;
    std::vector<double> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        y[i] = labels[i] == 1 ? 1.0 : -1.0;
        (labels[i] == 1 ? saw_pos : saw_neg) = true;
    }
    model.single_class_warning = !(saw_pos && saw_neg);

    const int d_std = X_raw.cols;
    const int d = d_std + (config.fit_intercept ? 1 : 0);
    Matrix X(X_raw.rows, d);
    for (int i = 0; i < X_raw.rows; ++i) {
        model.standardizer.transform_row(
            std::span<const double>(X_raw.row_ptr(i), d_std), std::span<double>(X.row_ptr(i), d_std));
        if (config.fit_intercept) X(i, d_std) = 1.0;
    }

    const LogisticProblem problem{X, y, config.C, config.fit_intercept ? 1 : 0};

    std::vector<double> w(d, 0.0);
    std::vector<double> g = problem.gradient(w);
    double f = problem.objective(w);
    model.objective_trace.push_back(f);

    // Lipschitz trace bound for the first trial step; BB steps afterwards.
    double sq = 0.0;
    for (int i = 0; i < X.rows; ++i) {
        const double* row = X.row_ptr(i);
        for (int j = 0; j < d; ++j) sq += row[j] * row[j];
    }
    double step = 1.0 / (1.0 + 0.25 * config.C * sq);

    std::vector<double> w_prev, g_prev;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const double gnorm = inf_norm(g);
        if (gnorm <= config.tolerance) {
            model.converged = true;
            break;
        }
        if (iter > 0) {
            // Barzilai-Borwein: (s.s)/(s.yv) for s = w - w_prev, yv = g - g_prev.
            double ss = 0.0, sy = 0.0;
            for (int j = 0; j < d; ++j) {
                const double s = w[j] - w_prev[j];
                ss += s * s;
                sy += s * (g[j] - g_prev[j]);
            }
            if (sy > 1e-300) step = ss / sy;
        }
        step = std::clamp(step, 1e-12, 1e12);

        const double g2 = dot(g, g);
        std::vector<double> w_new(d);
        double f_new = 0.0;
        bool accepted = false;
        double t = step;
        for (int bt = 0; bt < 60; ++bt) {
            for (int j = 0; j < d; ++j) w_new[j] = w[j] - t * g[j];
            f_new = problem.objective(w_new);
            if (f_new <= f - 1e-4 * t * g2) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // cannot decrease further at fp precision

        w_prev = w;
        g_prev = g;
        w = std::move(w_new);
        f = f_new;
        model.objective_trace.push_back(f);
        g = problem.gradient(w);
        step = t;
    }

    model.iterations = iter;
    model.final_grad_inf_norm = inf_norm(g);
    if (!model.converged) model.converged = model.final_grad_inf_norm <= config.tolerance;
    model.w = std::move(w);
    return model;
}

double TrainedModel::margin(std::span<const double> x_raw) const {
    const std::size_t d_std = standardizer.mean.size();
    double m = 0.0;
    for (std::size_t j = 0; j < d_std; ++j)
        m += w[j] * ((x_raw[j] - standardizer.mean[j]) / standardizer.scale[j]);
    if (fit_intercept) m += w[d_std];
    return m;
}

double TrainedModel::predict_proba(std::span<const double> x_raw) const {
    return sigmoid(margin(x_raw));
}

}  // namespace newspop
