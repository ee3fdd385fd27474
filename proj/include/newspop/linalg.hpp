#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace newspop {

// Dense row-major matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    double* row_ptr(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
    const double* row_ptr(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
};

struct SpEntry {
    int index = 0;
    double value = 0.0;
};

// Sparse vector, entries sorted by index, no duplicates.
using SparseVec = std::vector<SpEntry>;

inline double sparse_norm2(const SparseVec& v) {
    double s = 0.0;
    for (const auto& e : v) s += e.value * e.value;
    return std::sqrt(s);
}

// Row-sparse matrix (one SparseVec per row).
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<SparseVec> row;

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c), row(static_cast<std::size_t>(r)) {}

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : row) n += r.size();
        return n;
    }

    SparseMatrix transposed() const {
        SparseMatrix t(cols, rows);
        std::vector<int> counts(cols, 0);
        for (const auto& r : row)
            for (const auto& e : r) ++counts[e.index];
        for (int j = 0; j < cols; ++j) t.row[j].reserve(counts[j]);
        for (int i = 0; i < rows; ++i)
            for (const auto& e : row[i]) t.row[e.index].push_back({i, e.value});
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& r : row)
            for (const auto& e : r) s += e.value * e.value;
        return std::sqrt(s);
    }
};

}  // namespace newspop
