#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "newspop/civil.hpp"
#include "newspop/corpus.hpp"
#include "newspop/svd.hpp"
#include "newspop/topics.hpp"
#include "newspop/vectorize.hpp"

namespace newspop {

enum class Polarity { positive, negative, neutral };

class SentimentLexicon {
public:
    SentimentLexicon() = default;

    // CSV with header term,polarity; polarity in {positive,negative,neutral}.
    static SentimentLexicon load(const std::string& path);
    static SentimentLexicon from_entries(
        const std::vector<std::pair<std::string, Polarity>>& entries);

    // Terms are matched lowercase.
    const Polarity* polarity_of(const std::string& term) const {
        auto it = map_.find(term);
        return it == map_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return map_.size(); }
    const std::unordered_map<std::string, Polarity>& entries() const { return map_; }

private:
    std::unordered_map<std::string, Polarity> map_;
};

// Fixed feature layout. Table rows with a categorical weekday expand to a
// 7-dim one-hot, giving 72 actual columns.
namespace layout {
inline constexpr int kLatentRank = 10;
inline constexpr int kSignalOffset = 0;
inline constexpr int kSignalCount = 14;
inline constexpr int kTextualOffset = 14;
inline constexpr int kTextualCount = 20;
inline constexpr int kSentimentOffset = 34;
inline constexpr int kSentimentCount = 16;
inline constexpr int kSemanticOffset = 50;
inline constexpr int kSemanticCount = 22;
inline constexpr int kDim = 72;

const std::vector<std::string>& column_names();
}  // namespace layout

enum class FeatureGroup : unsigned { signal = 1, textual = 2, sentiment = 4, semantic = 8 };

struct FeatureGroupSet {
    unsigned bits = 0xF;  // all groups

    bool has(FeatureGroup g) const { return bits & static_cast<unsigned>(g); }
    static FeatureGroupSet all() { return {0xF}; }
    static FeatureGroupSet of(std::initializer_list<FeatureGroup> gs) {
        FeatureGroupSet s{0};
        for (auto g : gs) s.bits |= static_cast<unsigned>(g);
        return s;
    }
    // Column indices of the selected groups, ascending.
    std::vector<int> columns() const;
    std::string to_string() const;
};

// Parses a comma-separated list of group names; throws DataError on unknown names.
FeatureGroupSet parse_feature_groups(const std::string& csv);

using FeatureVector = std::vector<double>;  // always layout::kDim entries

// Token views of one (entity, day, t_p) feature interval.
struct DayDocs {
    std::vector<std::string> title_terms;     // unigrams + bigrams of the title profile
    std::vector<std::string> title_unigrams;  // unigrams only, for sentiment counts
    std::vector<std::string> subjective_terms;
    std::vector<std::string> entity_terms;  // entity-id multiset
    std::vector<std::string> tag_terms;     // tag multiset
    double distinct_entities = 0.0;
    double distinct_tags = 0.0;
};

// Stopwords (lowercase) drop from title unigrams and from the bigrams that
// would contain them before any counting; null or empty means no filtering.
DayDocs build_day_docs(const CorpusIndex& index, const SentimentLexicon& lexicon,
                       const std::string& entity, const CivilDate& day, int t_p,
                       const std::set<std::string>* stopwords = nullptr);

struct FeaturizeParams {
    std::size_t max_vocab_terms = 10000;
    LdaOptions lda;  // topics is pinned to layout::kLatentRank
    SvdOptions svd;
    std::uint64_t svd_seed = 7;
    std::set<std::string> stopwords;  // default off
};

// All fitted per-(entity, fold, t_p) artifacts needed to featurize any day.
// Every statistic inside is a pure function of the training days.
struct FeatureContext {
    std::string entity_id;
    int t_p = 0;

    TfidfModel title_tfidf;
    SvdProjector title_svd;
    LdaModel lda;
    TfidfModel subj_tfidf;
    SvdProjector subj_svd;
    TfidfModel entity_tfidf;
    SvdProjector entity_svd;
    TfidfModel tag_tfidf;
    SvdProjector tag_svd;
    SentimentLexicon lexicon;
    std::set<std::string> stopwords;

    static FeatureContext fit(const CorpusIndex& index, const SentimentLexicon& lexicon,
                              const std::string& entity, std::span<const CivilDate> training_days,
                              int t_p, const FeaturizeParams& params);

    FeatureVector assemble(const CorpusIndex& index, const CivilDate& day) const;

    std::vector<double> textual_features(const DayDocs& docs) const;    // 20
    std::vector<double> sentiment_features(const DayDocs& docs) const;  // 16
    std::vector<double> semantic_features(const DayDocs& docs) const;   // 22
};

// Signal block (14 dims); context-free.
std::vector<double> signal_features(const CorpusIndex& index, const std::string& entity,
                                    const CivilDate& day, int t_p);

void write_feature_matrix_csv(
    const std::vector<std::tuple<std::string, CivilDate, FeatureVector>>& rows,
    const std::string& path);

}  // namespace newspop
