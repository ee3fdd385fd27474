#include "newspop/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "newspop/parallel.hpp"

namespace newspop {

namespace {

std::vector<CivilDate> days_between(const CivilDate& first, const CivilDate& last) {
    std::vector<CivilDate> days;
    for (std::int64_t d = days_from_civil(first); d <= days_from_civil(last); ++d)
        days.push_back(civil_from_days(d));
    return days;
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_k(double k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", k);
    return buf;
}

}  // namespace

std::vector<FoldSpec> make_folds(int test_year, std::span<const int> tp_grid,
                                 std::span<const double> k_grid,
                                 std::span<const std::string> entities,
                                 std::optional<std::pair<CivilDate, CivilDate>> coverage,
                                 int first_month, int last_month) {
    if (tp_grid.empty() || k_grid.empty() || entities.empty())
        throw DataError("make_folds: empty grid or entity list");
    for (int tp : tp_grid)
        if (!is_valid_tp(tp)) throw DataError("make_folds: t_p " + std::to_string(tp) +
                                              " not in {0,4,8,12,16,20}");

    const CivilDate first_train_start = add_months(CivilDate{test_year, first_month, 1}, -24);
    if (coverage) {
        if (first_train_start < coverage->first) {
            const CivilDate feasible = add_months(
                CivilDate{coverage->first.year, coverage->first.month, 1},
                coverage->first.day == 1 ? 24 : 25);
            throw DataError("insufficient history: training for " + std::to_string(test_year) +
                            "-" + (first_month < 10 ? "0" : "") + std::to_string(first_month) +
                            " needs news from " + to_string(first_train_start) +
                            " but the corpus starts at " + to_string(coverage->first) +
                            "; earliest feasible test month is " + to_string(feasible).substr(0, 7));
        }
    }

    std::vector<FoldSpec> folds;
    for (const std::string& entity : entities) {
        for (double k : k_grid) {
            for (int tp : tp_grid) {
                for (int month = first_month; month <= last_month; ++month) {
                    FoldSpec f;
                    f.entity = entity;
                    f.test_year = test_year;
                    f.test_month = month;
                    f.train_start = add_months(CivilDate{test_year, month, 1}, -24);
                    f.train_end = add_days(CivilDate{test_year, month, 1}, -1);
                    f.t_p = tp;
                    f.k = k;
                    folds.push_back(std::move(f));
                }
            }
        }
    }
    return folds;
}

double f1_positive(const ConfusionCounts& c) {
    if (c.tp == 0) return 0.0;
    const double p = c.precision();
    const double r = c.recall();
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

ModelBundle fit_fold(const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
                     const SentimentLexicon& lexicon, const FoldSpec& fold,
                     const BacktestParams& params) {
    auto series_it = social.find(fold.entity);
    if (series_it == social.end())
        throw DataError("no social series for entity: " + fold.entity);
    const MentionSeries& series = series_it->second;

    const std::vector<CivilDate> train_days = days_between(fold.train_start, fold.train_end);
    std::vector<std::int64_t> popularities;
    popularities.reserve(train_days.size());
    for (const CivilDate& day : train_days)
        popularities.push_back(window_popularity(series, PredictionWindow{day, fold.t_p}));

    ModelBundle bundle;
    bundle.entity_id = fold.entity;
    bundle.t_p = fold.t_p;
    bundle.policy = fit_threshold(popularities, fold.k);
    bundle.groups = params.groups;
    bundle.train_start = fold.train_start;
    bundle.train_end = fold.train_end;
    bundle.context =
        FeatureContext::fit(index, lexicon, fold.entity, train_days, fold.t_p, params.featurize);

    const std::vector<int> cols = params.groups.columns();
    Matrix X(static_cast<int>(train_days.size()), static_cast<int>(cols.size()));
    std::vector<int> labels(train_days.size());
    for (std::size_t i = 0; i < train_days.size(); ++i) {
        const FeatureVector full = bundle.context.assemble(index, train_days[i]);
        double* row = X.row_ptr(static_cast<int>(i));
        for (std::size_t c = 0; c < cols.size(); ++c) row[c] = full[cols[c]];
        labels[i] = label(popularities[i], bundle.policy);
    }
    bundle.model = train(X, labels, params.train);
    return bundle;
}

std::vector<DayPrediction> score_days(const ModelBundle& bundle, const CorpusIndex& index,
                                      const std::map<std::string, MentionSeries>& social,
                                      std::span<const CivilDate> days) {
    const MentionSeries& series = social.at(bundle.entity_id);
    std::vector<DayPrediction> out;
    out.reserve(days.size());
    for (const CivilDate& day : days) {
        DayPrediction dp;
        dp.date = day;
        dp.popularity = window_popularity(series, PredictionWindow{day, bundle.t_p});
        dp.label = label(dp.popularity, bundle.policy);
        dp.probability = bundle.predict_proba(index, day);
        dp.prediction = dp.probability >= 0.5 ? 1 : 0;
        out.push_back(dp);
    }
    return out;
}

FoldResult score_fold(const ModelBundle& bundle, const CorpusIndex& index,
                      const std::map<std::string, MentionSeries>& social, const FoldSpec& fold) {
    FoldResult result;
    result.spec = fold;
    result.delta = bundle.policy.delta;
    result.single_class_warning = bundle.model.single_class_warning;
    result.days =
        score_days(bundle, index, social, days_between(fold.test_start(), fold.test_end()));
    for (const auto& dp : result.days) result.counts.add(dp.label, dp.prediction);
    return result;
}

FoldResult run_fold(const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
                    const SentimentLexicon& lexicon, const FoldSpec& fold,
                    const BacktestParams& params) {
    return score_fold(fit_fold(index, social, lexicon, fold, params), index, social, fold);
}

std::vector<SettingRow> aggregate(const std::vector<FoldResult>& folds, int expected_folds) {
    // key preserves first-seen order, which is the fold generation order
    std::vector<SettingRow> rows;
    auto find_row = [&](const FoldSpec& s) -> SettingRow& {
        for (auto& r : rows)
            if (r.entity == s.entity && r.t_p == s.t_p && r.k == s.k) return r;
        rows.push_back(SettingRow{s.entity, s.t_p, s.k, {}, 0});
        return rows.back();
    };
    for (const FoldResult& f : folds) {
        SettingRow& row = find_row(f.spec);
        row.counts.merge(f.counts);
        row.folds += 1;
    }
    std::vector<std::string> missing;
    for (const auto& r : rows)
        if (r.folds != expected_folds)
            missing.push_back(r.entity + " t_p=" + std::to_string(r.t_p) + " k=" + fmt_k(r.k) +
                              " has " + std::to_string(r.folds) + "/" +
                              std::to_string(expected_folds) + " folds");
    if (!missing.empty()) {
        std::string msg = "aggregate: incomplete settings:";
        for (const auto& m : missing) msg += " [" + m + "]";
        throw DataError(msg);
    }
    return rows;
}

std::vector<BacktestReport> run_backtest_variants(
    const CorpusIndex& index, const std::map<std::string, MentionSeries>& social,
    const SentimentLexicon& lexicon, const std::vector<FoldSpec>& folds,
    const BacktestParams& params, std::span<const FeatureGroupSet> variants, int expected_folds) {
    // Group folds sharing (entity, month, t_p): the feature context and the
    // day features depend on neither k nor the selected feature groups, so
    // they are computed once per group.
    struct Group {
        std::string entity;
        int month = 0;
        int t_p = 0;
        std::vector<std::size_t> fold_idx;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < folds.size(); ++i) {
        const FoldSpec& f = folds[i];
        Group* g = nullptr;
        for (auto& cand : groups)
            if (cand.entity == f.entity && cand.month == f.test_month && cand.t_p == f.t_p) {
                g = &cand;
                break;
            }
        if (!g) {
            groups.push_back(Group{f.entity, f.test_month, f.t_p, {}});
            g = &groups.back();
        }
        g->fold_idx.push_back(i);
    }

    std::vector<BacktestReport> reports(variants.size());
    for (auto& r : reports) r.folds.resize(folds.size());

    parallel_for_dynamic(static_cast<std::ptrdiff_t>(groups.size()), [&](std::ptrdiff_t gi) {
        const Group& group = groups[gi];
        const FoldSpec& proto = folds[group.fold_idx.front()];
        const MentionSeries& series = social.at(proto.entity);

        const std::vector<CivilDate> train_days = days_between(proto.train_start, proto.train_end);
        const std::vector<CivilDate> test_days =
            days_between(proto.test_start(), proto.test_end());

        const FeatureContext ctx = FeatureContext::fit(index, lexicon, proto.entity, train_days,
                                                       proto.t_p, params.featurize);

        Matrix Xfull(static_cast<int>(train_days.size()), layout::kDim);
        std::vector<std::int64_t> train_pop(train_days.size());
        for (std::size_t i = 0; i < train_days.size(); ++i) {
            const FeatureVector full = ctx.assemble(index, train_days[i]);
            std::copy(full.begin(), full.end(), Xfull.row_ptr(static_cast<int>(i)));
            train_pop[i] = window_popularity(series, PredictionWindow{train_days[i], proto.t_p});
        }
        Matrix Xtest_full(static_cast<int>(test_days.size()), layout::kDim);
        std::vector<std::int64_t> test_pop(test_days.size());
        for (std::size_t i = 0; i < test_days.size(); ++i) {
            const FeatureVector full = ctx.assemble(index, test_days[i]);
            std::copy(full.begin(), full.end(), Xtest_full.row_ptr(static_cast<int>(i)));
            test_pop[i] = window_popularity(series, PredictionWindow{test_days[i], proto.t_p});
        }

        for (std::size_t vi = 0; vi < variants.size(); ++vi) {
            const std::vector<int> cols = variants[vi].columns();
            Matrix X(Xfull.rows, static_cast<int>(cols.size()));
            for (int i = 0; i < Xfull.rows; ++i)
                for (std::size_t c = 0; c < cols.size(); ++c) X(i, static_cast<int>(c)) = Xfull(i, cols[c]);

            for (std::size_t fi : group.fold_idx) {
                const FoldSpec& fold = folds[fi];
                const LabelPolicy policy = fit_threshold(train_pop, fold.k);
                std::vector<int> labels(train_days.size());
                for (std::size_t i = 0; i < train_days.size(); ++i)
                    labels[i] = label(train_pop[i], policy);
                const TrainedModel model = train(X, labels, params.train);

                FoldResult result;
                result.spec = fold;
                result.delta = policy.delta;
                result.single_class_warning = model.single_class_warning;
                std::vector<double> xsel(cols.size());
                for (std::size_t i = 0; i < test_days.size(); ++i) {
                    DayPrediction dp;
                    dp.date = test_days[i];
                    dp.popularity = test_pop[i];
                    dp.label = label(test_pop[i], policy);
                    for (std::size_t c = 0; c < cols.size(); ++c)
                        xsel[c] = Xtest_full(static_cast<int>(i), cols[c]);
                    dp.probability = model.predict_proba(xsel);
                    dp.prediction = dp.probability >= 0.5 ? 1 : 0;
                    result.counts.add(dp.label, dp.prediction);
                    result.days.push_back(dp);
                }
                reports[vi].folds[fi] = std::move(result);
            }
        }
    });

    for (auto& r : reports) r.settings = aggregate(r.folds, expected_folds);
    return reports;
}

BacktestReport run_backtest(const CorpusIndex& index,
                            const std::map<std::string, MentionSeries>& social,
                            const SentimentLexicon& lexicon, const std::vector<FoldSpec>& folds,
                            const BacktestParams& params, int expected_folds) {
    const FeatureGroupSet variants[] = {params.groups};
    std::vector<BacktestReport> reports =
        run_backtest_variants(index, social, lexicon, folds, params, variants, expected_folds);
    return std::move(reports.front());
}

void write_report_csv(const std::vector<SettingRow>& settings, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report: " + path);
    out << "entity,t_p,k,tp_count,fp_count,fn_count,tn_count,precision,recall,f1,accuracy\n";
    for (const auto& r : settings) {
        out << r.entity << "," << r.t_p << "," << fmt_k(r.k) << "," << r.counts.tp << ","
            << r.counts.fp << "," << r.counts.fn << "," << r.counts.tn << ","
            << fmt(r.counts.precision()) << "," << fmt(r.counts.recall()) << ","
            << fmt(f1_positive(r.counts)) << "," << fmt(r.counts.accuracy()) << "\n";
    }
}

std::string render_report_table(const std::vector<SettingRow>& settings) {
    // F1(high) grid: one section per k, entity rows, t_p columns.
    std::vector<double> ks;
    std::vector<int> tps;
    std::vector<std::string> entities;
    for (const auto& r : settings) {
        if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
        if (std::find(tps.begin(), tps.end(), r.t_p) == tps.end()) tps.push_back(r.t_p);
        if (std::find(entities.begin(), entities.end(), r.entity) == entities.end())
            entities.push_back(r.entity);
    }
    std::sort(ks.begin(), ks.end());
    std::sort(tps.begin(), tps.end());

    auto lookup = [&](const std::string& e, int tp, double k) -> const SettingRow* {
        for (const auto& r : settings)
            if (r.entity == e && r.t_p == tp && r.k == k) return &r;
        return nullptr;
    };

    std::ostringstream os;
    os << "F1 of the high class by entity, t_p and k\n";
    for (double k : ks) {
        os << "\n## k = " << fmt_k(k) << "\n\n";
        os << "| entity |";
        for (int tp : tps) os << " t_p=" << tp << " |";
        os << "\n|---|";
        for (std::size_t i = 0; i < tps.size(); ++i) os << "---|";
        os << "\n";
        for (const auto& e : entities) {
            os << "| " << e << " |";
            for (int tp : tps) {
                const SettingRow* r = lookup(e, tp, k);
                os << " " << (r ? fmt(f1_positive(r->counts), "%.2f") : "-") << " |";
            }
            os << "\n";
        }
    }
    return os.str();
}

void write_report_markdown(const std::vector<SettingRow>& settings, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report: " + path);
    out << render_report_table(settings);
}

void write_folds_csv(const std::vector<FoldResult>& folds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write folds report: " + path);
    out << "entity,t_p,k,test_month,delta,tp_count,fp_count,fn_count,tn_count,f1,"
           "single_class_warning\n";
    for (const auto& f : folds) {
        out << f.spec.entity << "," << f.spec.t_p << "," << fmt_k(f.spec.k) << ","
            << f.spec.test_year << "-" << (f.spec.test_month < 10 ? "0" : "")
            << f.spec.test_month << "," << f.delta << "," << f.counts.tp << "," << f.counts.fp
            << "," << f.counts.fn << "," << f.counts.tn << "," << fmt(f1_positive(f.counts))
            << "," << (f.single_class_warning ? 1 : 0) << "\n";
    }
}

void write_predictions_csv(const std::vector<FoldResult>& folds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write predictions: " + path);
    out << "entity,date,t_p,k,f_p,delta,label,probability,prediction\n";
    for (const auto& f : folds) {
        for (const auto& d : f.days) {
            out << f.spec.entity << "," << to_string(d.date) << "," << f.spec.t_p << ","
                << fmt_k(f.spec.k) << "," << d.popularity << "," << f.delta << "," << d.label
                << "," << fmt(d.probability, "%.17g") << "," << d.prediction << "\n";
        }
    }
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write ablation report: " + path);
    out << "entity,feature_groups,t_p,k,tp_count,fp_count,fn_count,tn_count,f1\n";
    for (const auto& r : rows) {
        out << r.entity << "," << r.groups << "," << r.t_p << "," << fmt_k(r.k) << ","
            << r.counts.tp << "," << r.counts.fp << "," << r.counts.fn << "," << r.counts.tn
            << "," << fmt(f1_positive(r.counts)) << "\n";
    }
}

void write_ablation_svg(const std::vector<AblationRow>& rows, const std::string& path) {
    std::vector<std::string> entities;
    std::vector<std::string> groups;
    for (const auto& r : rows) {
        if (std::find(entities.begin(), entities.end(), r.entity) == entities.end())
            entities.push_back(r.entity);
        if (std::find(groups.begin(), groups.end(), r.groups) == groups.end())
            groups.push_back(r.groups);
    }
    const int bar_w = 26;
    const int gap = 18;
    const int group_w = static_cast<int>(groups.size()) * bar_w + gap;
    const int plot_h = 220;
    const int width = 60 + static_cast<int>(entities.size()) * group_w;
    const int height = plot_h + 70;
    static const char* palette[] = {"#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4"};

    std::ofstream out(path);
    if (!out) throw DataError("cannot write svg: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<line x1=\"50\" y1=\"10\" x2=\"50\" y2=\"" << 10 + plot_h
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"50\" y1=\"" << 10 + plot_h << "\" x2=\"" << width - 10 << "\" y2=\""
        << 10 + plot_h << "\" stroke=\"#333\"/>\n";
    for (int tick = 0; tick <= 10; tick += 2) {
        const int y = 10 + plot_h - tick * plot_h / 10;
        out << "<text x=\"44\" y=\"" << y + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
            << fmt(tick / 10.0, "%.1f") << "</text>\n";
    }
    for (std::size_t ei = 0; ei < entities.size(); ++ei) {
        const int x0 = 60 + static_cast<int>(ei) * group_w;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            double f1 = 0.0;
            for (const auto& r : rows)
                if (r.entity == entities[ei] && r.groups == groups[gi]) f1 = f1_positive(r.counts);
            const int h = static_cast<int>(f1 * plot_h);
            out << "<rect x=\"" << x0 + static_cast<int>(gi) * bar_w << "\" y=\""
                << 10 + plot_h - h << "\" width=\"" << bar_w - 3 << "\" height=\"" << h
                << "\" fill=\"" << palette[gi % 5] << "\"/>\n";
        }
        out << "<text x=\"" << x0 + group_w / 2 - gap / 2 << "\" y=\"" << 10 + plot_h + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << entities[ei] << "</text>\n";
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const int x = 60 + static_cast<int>(gi) * 120;
        const int y = 10 + plot_h + 40;
        out << "<rect x=\"" << x << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\""
            << palette[gi % 5] << "\"/>\n";
        out << "<text x=\"" << x + 16 << "\" y=\"" << y << "\" font-size=\"11\">" << groups[gi]
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace newspop
