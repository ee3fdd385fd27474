#include "newspop/vectorize.hpp"

#include <algorithm>
#include <cmath>

namespace newspop {

Vocabulary Vocabulary::fit(const std::vector<std::vector<std::string>>& docs,
                           std::size_t max_terms) {
    std::unordered_map<std::string, std::int64_t> tf;
    std::unordered_map<std::string, std::int64_t> df;
    for (const auto& doc : docs) {
        std::unordered_map<std::string, bool> seen;
        for (const auto& t : doc) {
            ++tf[t];
            if (!seen[t]) {
                seen[t] = true;
                ++df[t];
            }
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> ranked(tf.begin(), tf.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > max_terms) ranked.resize(max_terms);

    Vocabulary v;
    v.n_train_docs_ = static_cast<std::int64_t>(docs.size());
    v.terms_.reserve(ranked.size());
    v.df_.reserve(ranked.size());
    for (auto& [term, _] : ranked) {
        v.df_.push_back(df.at(term));
        v.index_.emplace(term, static_cast<int>(v.terms_.size()));
        v.terms_.push_back(std::move(term));
    }
    return v;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> terms, std::vector<std::int64_t> df,
                                  std::int64_t n_train_docs) {
    Vocabulary v;
    v.terms_ = std::move(terms);
    v.df_ = std::move(df);
    v.n_train_docs_ = n_train_docs;
    for (std::size_t i = 0; i < v.terms_.size(); ++i)
        v.index_.emplace(v.terms_[i], static_cast<int>(i));
    return v;
}

TfidfModel::TfidfModel(Vocabulary vocab) : vocab_(std::move(vocab)) {
    idf_.resize(vocab_.size());
    const double n = static_cast<double>(vocab_.n_train_docs());
    for (std::size_t i = 0; i < idf_.size(); ++i)
        idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(vocab_.document_frequencies()[i]))) + 1.0;
}

TfidfModel TfidfModel::from_parts(Vocabulary vocab, std::vector<double> idf) {
    TfidfModel m;
    m.vocab_ = std::move(vocab);
    m.idf_ = std::move(idf);
    return m;
}

SparseVec TfidfModel::vector(const std::vector<std::string>& tokens) const {
    std::unordered_map<int, double> counts;
    for (const auto& t : tokens) {
        const int id = vocab_.id_of(t);
        if (id >= 0) counts[id] += 1.0;
    }
    SparseVec v;
    v.reserve(counts.size());
    for (const auto& [id, tf] : counts) v.push_back({id, tf * idf_[id]});
    std::sort(v.begin(), v.end(), [](const SpEntry& a, const SpEntry& b) { return a.index < b.index; });
    const double norm = sparse_norm2(v);
    if (norm > 0.0)
        for (auto& e : v) e.value /= norm;
    return v;
}

SparseMatrix TfidfModel::matrix(const std::vector<std::vector<std::string>>& docs) const {
    SparseMatrix m(static_cast<int>(docs.size()), static_cast<int>(vocab_.size()));
    for (std::size_t i = 0; i < docs.size(); ++i) m.row[i] = vector(docs[i]);
    return m;
}

}  // namespace newspop
