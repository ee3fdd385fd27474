#include "newspop/kernels.hpp"

#include <cmath>

#include "newspop/parallel.hpp"

namespace newspop {

double log1p_exp(double z) {
    if (z > 35.0) return z;
    if (z < -35.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

inline void spmm_row(const SparseMatrix& A, const Matrix& B, Matrix& Y, int i) {
    double* out = Y.row_ptr(i);
    for (int j = 0; j < B.cols; ++j) out[j] = 0.0;
    for (const auto& e : A.row[i]) {
        const double v = e.value;
        const double* b = B.row_ptr(e.index);
        for (int j = 0; j < B.cols; ++j) out[j] += v * b[j];
    }
}

inline void gemm_row(const Matrix& A, const Matrix& B, Matrix& C, int i) {
    double* out = C.row_ptr(i);
    for (int j = 0; j < B.cols; ++j) out[j] = 0.0;
    const double* a = A.row_ptr(i);
    for (int k = 0; k < A.cols; ++k) {
        const double v = a[k];
        if (v == 0.0) continue;
        const double* b = B.row_ptr(k);
        for (int j = 0; j < B.cols; ++j) out[j] += v * b[j];
    }
}

constexpr int kChunk = 256;

// Partial loss + gradient over examples [lo, hi), accumulated sequentially.
void logistic_chunk(const Matrix& X, std::span<const double> y, std::span<const double> w,
                    int lo, int hi, double& loss, double* grad) {
    const int d = X.cols;
    loss = 0.0;
    for (int j = 0; j < d; ++j) grad[j] = 0.0;
    for (int i = lo; i < hi; ++i) {
        const double* x = X.row_ptr(i);
        double m = 0.0;
        for (int j = 0; j < d; ++j) m += w[j] * x[j];
        const double ym = y[i] * m;
        loss += log1p_exp(-ym);
        const double g = -y[i] * sigmoid(-ym);
        for (int j = 0; j < d; ++j) grad[j] += g * x[j];
    }
}

LossGrad logistic_sum_impl(const Matrix& X, std::span<const double> y,
                           std::span<const double> w, bool parallel) {
    const int n = X.rows;
    const int d = X.cols;
    const int nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> chunk_loss(nchunks, 0.0);
    Matrix chunk_grad(nchunks, d);

    auto body = [&](std::ptrdiff_t c) {
        const int lo = static_cast<int>(c) * kChunk;
        const int hi = std::min(n, lo + kChunk);
        logistic_chunk(X, y, w, lo, hi, chunk_loss[c], chunk_grad.row_ptr(static_cast<int>(c)));
    };
    if (parallel) {
        parallel_for(nchunks, body);
    } else {
        for (std::ptrdiff_t c = 0; c < nchunks; ++c) body(c);
    }

    LossGrad out;
    out.grad.assign(d, 0.0);
    for (int c = 0; c < nchunks; ++c) {
        out.loss += chunk_loss[c];
        const double* g = chunk_grad.row_ptr(c);
        for (int j = 0; j < d; ++j) out.grad[j] += g[j];
    }
    return out;
}

}  // namespace

void spmm_serial(const SparseMatrix& A, const Matrix& B, Matrix& Y) {
    Y = Matrix(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) spmm_row(A, B, Y, i);
}

void spmm(const SparseMatrix& A, const Matrix& B, Matrix& Y) {
    Y = Matrix(A.rows, B.cols);
    parallel_for(A.rows, [&](std::ptrdiff_t i) { spmm_row(A, B, Y, static_cast<int>(i)); });
}

void gemm_serial(const Matrix& A, const Matrix& B, Matrix& C) {
    C = Matrix(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) gemm_row(A, B, C, i);
}

void gemm(const Matrix& A, const Matrix& B, Matrix& C) {
    C = Matrix(A.rows, B.cols);
    parallel_for(A.rows, [&](std::ptrdiff_t i) { gemm_row(A, B, C, static_cast<int>(i)); });
}

LossGrad logistic_sum_serial(const Matrix& X, std::span<const double> y,
                             std::span<const double> w) {
    return logistic_sum_impl(X, y, w, false);
}

LossGrad logistic_sum(const Matrix& X, std::span<const double> y, std::span<const double> w) {
    return logistic_sum_impl(X, y, w, true);
}

namespace {
int g_workers = 0;
}

void set_worker_threads(int n) { g_workers = n < 0 ? 0 : n; }
int worker_threads() { return g_workers; }

}  // namespace newspop
