#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "newspop/linalg.hpp"

namespace newspop {

// Training-set term vocabulary: the top max_terms terms by total corpus
// frequency, ties broken lexicographically. Term ids are positions in the
// ranked list.
class Vocabulary {
public:
    Vocabulary() = default;

    static Vocabulary fit(const std::vector<std::vector<std::string>>& docs,
                          std::size_t max_terms = 10000);

    std::size_t size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::int64_t>& document_frequencies() const { return df_; }
    std::int64_t n_train_docs() const { return n_train_docs_; }

    int id_of(const std::string& term) const {
        auto it = index_.find(term);
        return it == index_.end() ? -1 : it->second;
    }

    // Serialization hooks for the model bundle.
    static Vocabulary from_parts(std::vector<std::string> terms, std::vector<std::int64_t> df,
                                 std::int64_t n_train_docs);

private:
    std::vector<std::string> terms_;
    std::vector<std::int64_t> df_;  // document frequency per term
    std::int64_t n_train_docs_ = 0;
    std::unordered_map<std::string, int> index_;
};

// TF-IDF with the IDF frozen from the training corpus:
// idf(t) = ln((1 + N) / (1 + df(t))) + 1, rows L2-normalized when nonzero.
class TfidfModel {
public:
    TfidfModel() = default;
    explicit TfidfModel(Vocabulary vocab);

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<double>& idf() const { return idf_; }

    // Out-of-vocabulary tokens are ignored.
    SparseVec vector(const std::vector<std::string>& tokens) const;

    // Document-term matrix over fitted vocabulary (one row per doc).
    SparseMatrix matrix(const std::vector<std::vector<std::string>>& docs) const;

    static TfidfModel from_parts(Vocabulary vocab, std::vector<double> idf);

private:
    Vocabulary vocab_;
    std::vector<double> idf_;
};

}  // namespace newspop
