#pragma once

#include <cstdint>
#include <vector>

#include "newspop/linalg.hpp"

namespace newspop {

struct LdaOptions {
    int topics = 10;
    double alpha = 5.0;  // 50 / K for the default K
    double beta = 0.01;
    int train_sweeps = 1000;
    int foldin_sweeps = 100;  // theta averaged over the second half
    std::uint64_t seed = 42;
};

// Topic model fitted by collapsed Gibbs sampling. Documents are lists of
// vocabulary term ids; the vocabulary is shared with the TF-IDF pipeline.
class LdaModel {
public:
    LdaModel() = default;

    // Throws std::invalid_argument when every document is empty.
    static LdaModel fit(const std::vector<std::vector<int>>& docs, int vocab_size,
                        const LdaOptions& opts);

    // Fold-in inference with phi frozen. Ids outside [0, vocab_size) are
    // skipped; an empty (or fully skipped) document yields uniform theta.
    std::vector<double> infer_theta(const std::vector<int>& doc) const;

    int topics() const { return K_; }
    int vocab_size() const { return V_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    int foldin_sweeps() const { return foldin_sweeps_; }
    std::uint64_t seed() const { return seed_; }
    const Matrix& phi() const { return phi_; }  // K x V, rows sum to 1

    static LdaModel from_parts(Matrix phi, double alpha, double beta, std::uint64_t seed,
                               int foldin_sweeps);

private:
    int K_ = 0;
    int V_ = 0;
    double alpha_ = 5.0;
    double beta_ = 0.01;
    int foldin_sweeps_ = 100;
    std::uint64_t seed_ = 0;
    Matrix phi_;
};

}  // namespace newspop
