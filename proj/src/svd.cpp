#include "newspop/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newspop/kernels.hpp"
#include "newspop/rng.hpp"

namespace newspop {

namespace {

double column_dot(const Matrix& M, int j, int k) {
    double s = 0.0;
    for (int i = 0; i < M.rows; ++i) s += M(i, j) * M(i, k);
    return s;
}

// Modified Gram-Schmidt, run twice for stability. Columns with negligible
// residual norm are zeroed.
void orthonormalize(Matrix& M) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < M.cols; ++j) {
            for (int k = 0; k < j; ++k) {
                const double proj = column_dot(M, j, k);
                if (proj != 0.0)
                    for (int i = 0; i < M.rows; ++i) M(i, j) -= proj * M(i, k);
            }
            double norm = std::sqrt(column_dot(M, j, j));
            if (norm > 1e-300) {
                for (int i = 0; i < M.rows; ++i) M(i, j) /= norm;
            } else {
                for (int i = 0; i < M.rows; ++i) M(i, j) = 0.0;
            }
        }
    }
}

Matrix to_dense(const SparseMatrix& A) {
    Matrix D(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (const auto& e : A.row[i]) D(i, e.index) = e.value;
    return D;
}

// One-sided Jacobi: orthogonalizes the columns of W in place while
// accumulating the rotations in V (n x n). On exit W = U * diag(sigma) * V^T
// held as W = (original) * V with mutually orthogonal columns.
void one_sided_jacobi(Matrix& W, Matrix& V) {
    const int n = W.cols;
    V = Matrix(n, n);
    for (int i = 0; i < n; ++i) V(i, i) = 1.0;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int j = 0; j < n - 1; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const double alpha = column_dot(W, j, j);
                const double beta = column_dot(W, k, k);
                const double gamma = column_dot(W, j, k);
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < W.rows; ++i) {
                    const double wj = W(i, j);
                    const double wk = W(i, k);
                    W(i, j) = c * wj - s * wk;
                    W(i, k) = s * wj + c * wk;
                }
                for (int i = 0; i < n; ++i) {
                    const double vj = V(i, j);
                    const double vk = V(i, k);
                    V(i, j) = c * vj - s * vk;
                    V(i, k) = s * vj + c * vk;
                }
            }
        }
        if (!rotated) break;
    }
}

std::vector<int> order_by_desc(const std::vector<double>& vals) {
    std::vector<int> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    return idx;
}

SvdProjector dense_svd(const SparseMatrix& A, int rank, int rank_eff) {
    SvdProjector out;
    out.rank = rank;
    out.rank_eff = rank_eff;
    out.sigma.assign(rank, 0.0);

    const bool transpose = A.rows < A.cols;  // Jacobi wants tall-or-square
    Matrix W = transpose ? to_dense(A.transposed()) : to_dense(A);
    Matrix Vrot;
    one_sided_jacobi(W, Vrot);

    const int n = W.cols;
    std::vector<double> norms(n);
    for (int j = 0; j < n; ++j) norms[j] = std::sqrt(column_dot(W, j, j));
    const std::vector<int> order = order_by_desc(norms);

    out.V = Matrix(A.cols, rank_eff);
    for (int r = 0; r < rank_eff && r < n; ++r) {
        const int j = order[r];
        out.sigma[r] = norms[j];
        if (transpose) {
            // A^T = U' S V'^T with U' = W/sigma; right factor of A is U'.
            if (norms[j] > 0.0)
                for (int i = 0; i < A.cols; ++i) out.V(i, r) = W(i, j) / norms[j];
        } else {
            for (int i = 0; i < A.cols; ++i) out.V(i, r) = Vrot(i, j);
        }
    }
    return out;
}

SvdProjector randomized_svd(const SparseMatrix& A, int rank, int rank_eff, std::uint64_t seed,
                            const SvdOptions& opts) {
    SvdProjector out;
    out.rank = rank;
    out.rank_eff = rank_eff;
    out.sigma.assign(rank, 0.0);
    out.V = Matrix(A.cols, rank_eff);

    const int l = std::min(rank_eff + opts.oversample, std::min(A.rows, A.cols));
    Rng rng(seed);
    Matrix Omega(A.cols, l);
    for (double& x : Omega.a) x = rng.normal();

    Matrix Q;
    spmm(A, Omega, Q);  // rows x l
    orthonormalize(Q);

    const SparseMatrix At = A.transposed();
    std::vector<double> prev_est(l, 0.0);
    Matrix Z, Y;
    for (int iter = 0; iter < opts.max_power_iterations; ++iter) {
        spmm(At, Q, Z);  // cols x l
        orthonormalize(Z);
        spmm(A, Z, Y);  // rows x l

        std::vector<double> est(l);
        for (int j = 0; j < l; ++j) est[j] = std::sqrt(column_dot(Y, j, j));
        std::sort(est.begin(), est.end(), std::greater<>());

        Q = Y;
        orthonormalize(Q);

        double max_rel = 0.0;
        for (int j = 0; j < l; ++j) {
            const double denom = std::max(est[j], 1e-300);
            max_rel = std::max(max_rel, std::abs(est[j] - prev_est[j]) / denom);
        }
        prev_est = est;
        if (max_rel < opts.power_tolerance) break;
    }

    // B = Q^T A, held transposed: Bt = A^T Q (cols x l). SVD of the small
    // Gram matrix G = B B^T finishes the factorization.
    Matrix Bt;
    spmm(At, Q, Bt);
    Matrix G(l, l);
    for (int j = 0; j < l; ++j)
        for (int k = j; k < l; ++k) {
            const double g = column_dot(Bt, j, k);
            G(j, k) = g;
            G(k, j) = g;
        }
    std::vector<double> eigvals;
    Matrix R;
    jacobi_eigh(G, eigvals, R);

    const double sigma_max = eigvals.empty() ? 0.0 : std::sqrt(std::max(0.0, eigvals[0]));
    for (int r = 0; r < rank_eff && r < l; ++r) {
        const double s = std::sqrt(std::max(0.0, eigvals[r]));
        if (s <= sigma_max * 1e-14 || s == 0.0) continue;
        out.sigma[r] = s;
        for (int i = 0; i < A.cols; ++i) {
            double v = 0.0;
            for (int j = 0; j < l; ++j) v += Bt(i, j) * R(j, r);
            out.V(i, r) = v / s;
        }
    }
    return out;
}

}  // namespace

void jacobi_eigh(const Matrix& S, std::vector<double>& values, Matrix& vectors) {
    const int n = S.rows;
    Matrix A = S;
    vectors = Matrix(n, n);
    for (int i = 0; i < n; ++i) vectors(i, i) = 1.0;

    const int max_sweeps = 80;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-28 * (1.0 + std::abs(A(0, 0)))) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < n; ++i) {
                    const double aip = A(i, p);
                    const double aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = A(p, i);
                    const double aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = vectors(i, p);
                    const double viq = vectors(i, q);
                    vectors(i, p) = c * vip - s * viq;
                    vectors(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i);
    const std::vector<int> order = order_by_desc(diag);
    values.resize(n);
    Matrix sorted(n, n);
    for (int r = 0; r < n; ++r) {
        values[r] = diag[order[r]];
        for (int i = 0; i < n; ++i) sorted(i, r) = vectors(i, order[r]);
    }
    vectors = sorted;
}

SvdProjector fit_svd(const SparseMatrix& A, int rank, std::uint64_t seed, const SvdOptions& opts) {
    SvdProjector out;
    out.rank = rank;
    const int rank_eff = std::max(0, std::min({rank, A.rows, A.cols}));
    out.rank_eff = rank_eff;
    out.sigma.assign(rank, 0.0);
    out.V = Matrix(A.cols, rank_eff);
    if (rank_eff == 0 || A.nnz() == 0) return out;
    if (std::max(A.rows, A.cols) <= opts.dense_limit) return dense_svd(A, rank, rank_eff);
    return randomized_svd(A, rank, rank_eff, seed, opts);
}

std::vector<double> SvdProjector::project(const SparseVec& v) const {
    std::vector<double> out(rank, 0.0);
    for (int j = 0; j < rank_eff; ++j) {
        double s = 0.0;
        for (const auto& e : v) s += e.value * V(e.index, j);
        out[j] = s;
    }
    return out;
}

std::vector<double> SvdProjector::project(std::span<const double> dense) const {
    std::vector<double> out(rank, 0.0);
    for (int j = 0; j < rank_eff; ++j) {
        double s = 0.0;
        for (int i = 0; i < V.rows; ++i) s += dense[i] * V(i, j);
        out[j] = s;
    }
    return out;
}

double svd_reconstruction_error(const SparseMatrix& A, const SvdProjector& p) {
    // ||A - A V V^T||_F^2 = ||A||_F^2 - ||A V||_F^2 for orthonormal V.
    double total = 0.0;
    for (const auto& r : A.row)
        for (const auto& e : r) total += e.value * e.value;
    double projected = 0.0;
    for (const auto& r : A.row) {
        const std::vector<double> z = p.project(r);
        for (double x : z) projected += x * x;
    }
    return std::sqrt(std::max(0.0, total - projected));
}

}  // namespace newspop
