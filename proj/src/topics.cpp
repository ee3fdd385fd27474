#include "newspop/topics.hpp"

#include <algorithm>
#include <stdexcept>

#include "newspop/rng.hpp"

namespace newspop {

namespace {

std::uint64_t fnv1a(const std::vector<int>& doc) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int id : doc) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(id));
        h *= 1099511628211ULL;
    }
    return h;
}

int sample_from(const std::vector<double>& weights, double total, Rng& rng) {
    const double u = rng.uniform_real() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace

LdaModel LdaModel::fit(const std::vector<std::vector<int>>& docs, int vocab_size,
                       const LdaOptions& opts) {
    const int K = opts.topics;
    const int V = vocab_size;
    std::size_t total_tokens = 0;
    for (const auto& d : docs) total_tokens += d.size();
    if (total_tokens == 0) throw std::invalid_argument("fit_lda: all documents are empty");

    const int D = static_cast<int>(docs.size());
    std::vector<std::vector<int>> z(D);
    Matrix n_dk(D, K);
    Matrix n_kw(K, V);
    std::vector<double> n_k(K, 0.0);

    Rng rng(opts.seed);
    for (int d = 0; d < D; ++d) {
        z[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const int w = docs[d][i];
            const int k = static_cast<int>(rng.uniform_u64(K));
            z[d][i] = k;
            n_dk(d, k) += 1.0;
            n_kw(k, w) += 1.0;
            n_k[k] += 1.0;
        }
    }

    const double vbeta = V * opts.beta;
    std::vector<double> weights(K);
    for (int sweep = 0; sweep < opts.train_sweeps; ++sweep) {
        for (int d = 0; d < D; ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const int w = docs[d][i];
                const int old_k = z[d][i];
                n_dk(d, old_k) -= 1.0;
                n_kw(old_k, w) -= 1.0;
                n_k[old_k] -= 1.0;

                double total = 0.0;
                for (int k = 0; k < K; ++k) {
                    const double p = (n_dk(d, k) + opts.alpha) * (n_kw(k, w) + opts.beta) /
                                     (n_k[k] + vbeta);
                    weights[k] = p;
                    total += p;
                }
                const int new_k = sample_from(weights, total, rng);
                z[d][i] = new_k;
                n_dk(d, new_k) += 1.0;
                n_kw(new_k, w) += 1.0;
                n_k[new_k] += 1.0;
            }
        }
    }

    LdaModel model;
    model.K_ = K;
    model.V_ = V;
    model.alpha_ = opts.alpha;
    model.beta_ = opts.beta;
    model.foldin_sweeps_ = opts.foldin_sweeps;
    model.seed_ = opts.seed;
    model.phi_ = Matrix(K, V);
    for (int k = 0; k < K; ++k) {
        long double row_sum = 0.0L;
        for (int w = 0; w < V; ++w) {
            const double p = (n_kw(k, w) + opts.beta) / (n_k[k] + vbeta);
            model.phi_(k, w) = p;
            row_sum += p;
        }
        const double norm = static_cast<double>(row_sum);
        for (int w = 0; w < V; ++w) model.phi_(k, w) /= norm;
    }
    return model;
}

LdaModel LdaModel::from_parts(Matrix phi, double alpha, double beta, std::uint64_t seed,
                              int foldin_sweeps) {
    LdaModel m;
    m.K_ = phi.rows;
    m.V_ = phi.cols;
    m.alpha_ = alpha;
    m.beta_ = beta;
    m.seed_ = seed;
    m.foldin_sweeps_ = foldin_sweeps;
    m.phi_ = std::move(phi);
    return m;
}

std::vector<double> LdaModel::infer_theta(const std::vector<int>& doc) const {
    const int K = K_;
    std::vector<int> kept;
    kept.reserve(doc.size());
    for (int id : doc)
        if (id >= 0 && id < V_) kept.push_back(id);

    if (kept.empty()) return std::vector<double>(K, 1.0 / K);

    Rng rng(seed_ ^ fnv1a(kept));
    const int n = static_cast<int>(kept.size());
    std::vector<int> z(n);
    std::vector<double> n_dk(K, 0.0);
    for (int i = 0; i < n; ++i) {
        const int k = static_cast<int>(rng.uniform_u64(K));
        z[i] = k;
        n_dk[k] += 1.0;
    }

    const int sweeps = std::max(1, foldin_sweeps_);
    const int avg_from = sweeps / 2;
    std::vector<double> accum(K, 0.0);
    int avg_count = 0;
    std::vector<double> weights(K);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int i = 0; i < n; ++i) {
            const int w = kept[i];
            n_dk[z[i]] -= 1.0;
            double total = 0.0;
            for (int k = 0; k < K; ++k) {
                const double p = phi_(k, w) * (n_dk[k] + alpha_);
                weights[k] = p;
                total += p;
            }
            const int new_k = sample_from(weights, total, rng);
            z[i] = new_k;
            n_dk[new_k] += 1.0;
        }
        if (sweep >= avg_from) {
            for (int k = 0; k < K; ++k) accum[k] += n_dk[k];
            ++avg_count;
        }
    }

    std::vector<double> theta(K);
    long double sum = 0.0L;
    const double denom = static_cast<double>(n) + K * alpha_;
    for (int k = 0; k < K; ++k) {
        theta[k] = (accum[k] / avg_count + alpha_) / denom;
        sum += theta[k];
    }
    const double norm = static_cast<double>(sum);
    for (double& t : theta) t /= norm;
    return theta;
}

}  // namespace newspop
