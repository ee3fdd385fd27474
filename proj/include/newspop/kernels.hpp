#pragma once

#include <span>
#include <vector>

#include "newspop/linalg.hpp"

namespace newspop {

// Hot loops of the pipeline, each in a plain serial form and an OpenMP form.
// The OpenMP forms assign every output element (or fixed-size input chunk) to
// exactly one thread and merge partials in a fixed order, so results are
// bit-identical to the serial forms for any thread count. The serial forms
// stay as the reference for tests and the kernels benchmark.

// Y = A * B, A sparse (m x k), B dense (k x n).
void spmm_serial(const SparseMatrix& A, const Matrix& B, Matrix& Y);
void spmm(const SparseMatrix& A, const Matrix& B, Matrix& Y);

// C = A * B, dense.
void gemm_serial(const Matrix& A, const Matrix& B, Matrix& C);
void gemm(const Matrix& A, const Matrix& B, Matrix& C);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

// Plain sum over examples of log(1 + exp(-y_i * w.x_i)) and its gradient,
// without any penalty term. X is n x d, y in {-1,+1}. Summation runs over
// fixed 256-example chunks merged in chunk order in both forms.
LossGrad logistic_sum_serial(const Matrix& X, std::span<const double> y,
                             std::span<const double> w);
LossGrad logistic_sum(const Matrix& X, std::span<const double> y, std::span<const double> w);

// log(1 + exp(z)) without overflow.
double log1p_exp(double z);

// 1 / (1 + exp(-z)).
double sigmoid(double z);

}  // namespace newspop
