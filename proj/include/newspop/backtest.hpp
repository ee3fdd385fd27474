#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newspop/bundle.hpp"
#include "newspop/civil.hpp"
#include "newspop/classifier.hpp"
#include "newspop/corpus.hpp"
#include "newspop/featurize.hpp"
#include "newspop/labeling.hpp"
#include "newspop/mentions.hpp"

namespace newspop {

// One (entity, test month, t_p, k) evaluation unit: the model is trained on
// the 24 calendar months preceding the test month.
struct FoldSpec {
    std::string entity;
    int test_year = 0;
    int test_month = 0;
    CivilDate train_start;
    CivilDate train_end;
    int t_p = 0;
    double k = 0.5;

    CivilDate test_start() const { return CivilDate{test_year, test_month, 1}; }
    CivilDate test_end() const {
        return CivilDate{test_year, test_month, days_in_month(test_year, test_month)};
    }
};

// Folds for the grid, ordered by (entity, k, t_p, month). When `coverage`
// is given, the news corpus must reach back 24 months before the first test
// month; otherwise this throws a DataError naming the earliest feasible
// test month.
std::vector<FoldSpec> make_folds(int test_year, std::span<const int> tp_grid,
                                 std::span<const double> k_grid,
                                 std::span<const std::string> entities,
                                 std::optional<std::pair<CivilDate, CivilDate>> coverage = {},
                                 int first_month = 1, int last_month = 12);

struct ConfusionCounts {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;

    void add(int label, int prediction) {
        if (prediction == 1)
            (label == 1 ? tp : fp) += 1;
        else
            (label == 1 ? fn : tn) += 1;
    }
    void merge(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
    }
    std::int64_t total() const { return tp + fp + fn + tn; }
    double precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
    double recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
    double accuracy() const {
        return total() == 0 ? 0.0 : double(tp + tn) / double(total());
    }
};

// F1 on the positive class; 0 by convention when TP = 0 or P + R = 0.
double f1_positive(const ConfusionCounts& c);

struct DayPrediction {
    CivilDate date;
    std::int64_t popularity = 0;  // realized f_p
    int label = 0;
    double probability = 0.0;
    int prediction = 0;
};

struct FoldResult {
    FoldSpec spec;
    std::int64_t delta = 0;
    ConfusionCounts counts;
    std::vector<DayPrediction> days;
    bool single_class_warning = false;
};

struct BacktestParams {
    FeaturizeParams featurize;
    TrainConfig train;
    FeatureGroupSet groups = FeatureGroupSet::all();
};

// Fits the label policy, feature context and classifier on the fold's
// training window only, bundled for serialization / reuse.
ModelBundle fit_fold(const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
                     const SentimentLexicon& lexicon, const FoldSpec& fold,
                     const BacktestParams& params);

// Scores every day of the fold's test month with the given bundle.
FoldResult score_fold(const ModelBundle& bundle, const CorpusIndex& index,
                      const std::map<std::string, MentionSeries>& social, const FoldSpec& fold);

// fit_fold + score_fold.
FoldResult run_fold(const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
                    const SentimentLexicon& lexicon, const FoldSpec& fold,
                    const BacktestParams& params);

struct SettingRow {
    std::string entity;
    int t_p = 0;
    double k = 0.5;
    ConfusionCounts counts;  // pooled over the setting's folds
    int folds = 0;
};

struct BacktestReport {
    std::vector<FoldResult> folds;
    std::vector<SettingRow> settings;  // ordered by (entity, k, t_p)
};

// Pools fold confusion counts per (entity, t_p, k). Throws when a setting is
// missing some of the expected months.
std::vector<SettingRow> aggregate(const std::vector<FoldResult>& folds, int expected_folds);

// Runs every fold (feature contexts shared across k values of the same
// (entity, month, t_p); folds execute in parallel) and aggregates.
BacktestReport run_backtest(const CorpusIndex& index,
                            const std::map<std::string, MentionSeries>& social,
                            const SentimentLexicon& lexicon, const std::vector<FoldSpec>& folds,
                            const BacktestParams& params, int expected_folds);

// Same fold sweep executed once per feature-group variant; contexts and the
// full 72-column feature matrices are fitted once and shared, only the
// column selection and the classifier differ. Returns one report per
// variant, in order.
std::vector<BacktestReport> run_backtest_variants(
    const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
    const SentimentLexicon& lexicon, const std::vector<FoldSpec>& folds,
    const BacktestParams& params, std::span<const FeatureGroupSet> variants, int expected_folds);

// Scores an arbitrary day range with a fitted bundle.
std::vector<DayPrediction> score_days(const ModelBundle& bundle, const CorpusIndex& index,
                                      const std::map<std::string, MentionSeries>& social,
                                      std::span<const CivilDate> days);

void write_report_csv(const std::vector<SettingRow>& settings, const std::string& path);
// Per-fold confusion counts (one row per test month) so macro-averages can
// be computed externally.
void write_folds_csv(const std::vector<FoldResult>& folds, const std::string& path);
void write_report_markdown(const std::vector<SettingRow>& settings, const std::string& path);
std::string render_report_table(const std::vector<SettingRow>& settings);
void write_predictions_csv(const std::vector<FoldResult>& folds, const std::string& path);

struct AblationRow {
    std::string entity;
    std::string groups;
    int t_p = 0;
    double k = 0.5;
    ConfusionCounts counts;
};
void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path);
void write_ablation_svg(const std::vector<AblationRow>& rows, const std::string& path);

}  // namespace newspop
