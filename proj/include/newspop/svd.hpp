#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "newspop/linalg.hpp"

namespace newspop {

// Right singular factors of a docs x terms matrix, truncated to `rank`.
// rank_eff = min(rank, rows, cols) columns are actually factored; projections
// are zero-padded up to `rank` so downstream feature layouts stay fixed.
struct SvdProjector {
    Matrix V;                   // terms x rank_eff, orthonormal columns
    std::vector<double> sigma;  // size rank, non-increasing, zero-padded
    int rank = 0;
    int rank_eff = 0;

    // Coordinates of a row vector in the latent basis: v . V.
    std::vector<double> project(const SparseVec& v) const;
    std::vector<double> project(std::span<const double> dense) const;
};

struct SvdOptions {
    int oversample = 8;
    int max_power_iterations = 100;
    double power_tolerance = 1e-12;  // relative change of singular value estimates
    int dense_limit = 512;           // one-sided Jacobi when max(rows, cols) <= limit
};

// Rank-`rank` truncated SVD. Small matrices go through a dense one-sided
// Jacobi; larger ones through seeded randomized subspace iteration, so the
// result is deterministic for a fixed seed.
SvdProjector fit_svd(const SparseMatrix& A, int rank = 10, std::uint64_t seed = 1,
                     const SvdOptions& opts = {});

// || A - A V V^T ||_F via the orthogonal-projection identity.
double svd_reconstruction_error(const SparseMatrix& A, const SvdProjector& p);

// Symmetric eigendecomposition by cyclic Jacobi, eigenvalues sorted
// non-increasing. Used by the SVD core; exposed for reuse.
void jacobi_eigh(const Matrix& S, std::vector<double>& values, Matrix& vectors);

}  // namespace newspop
