#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "newspop/backtest.hpp"
#include "newspop/config.hpp"
#include "newspop/parallel.hpp"
#include "newspop/synthgen.hpp"

namespace fs = std::filesystem;
using namespace newspop;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "configuration file (key = value sections)");
    cmd->add_option("-s,--set", args.overrides,
                    "override a config value, e.g. --set run.jobs=4 (repeatable)");
}

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty()
                        ? RunConfig::from_overrides(args.overrides)
                        : RunConfig::load(args.config_path, args.overrides);
    set_worker_threads(cfg.jobs);
    return cfg;
}

struct Corpus {
    EntityRegistry registry;
    CorpusIndex index;
    RejectsReport news_rejects;
    std::map<std::string, MentionSeries> social;
    RejectsReport social_rejects;
    SentimentLexicon lexicon;
};

Corpus load_corpus(const RunConfig& cfg, bool need_social = true, bool need_lexicon = true) {
    Corpus c;
    c.registry = load_registry(cfg.registry_path);
    NewsLoadResult news = load_news(cfg.news_path, c.registry);
    c.index = std::move(news.index);
    c.news_rejects = std::move(news.rejects);
    if (need_social) {
        SocialLoadResult social = load_social(cfg.social_path, c.registry);
        c.social = std::move(social.series);
        c.social_rejects = std::move(social.rejects);
    }
    if (need_lexicon && !cfg.lexicon_path.empty())
        c.lexicon = SentimentLexicon::load(cfg.lexicon_path);
    return c;
}

std::vector<std::string> resolve_entities(const RunConfig& cfg, const EntityRegistry& registry) {
    if (!cfg.entities.empty()) {
        for (const auto& e : cfg.entities)
            if (!registry.has(e)) throw DataError("unknown entity: " + e);
        return cfg.entities;
    }
    std::vector<std::string> out;
    for (const auto& e : registry.entries()) out.push_back(e.id);
    return out;
}

BacktestParams backtest_params(const RunConfig& cfg) {
    BacktestParams p;
    p.featurize = cfg.featurize;
    p.train = cfg.train;
    p.groups = parse_feature_groups(cfg.feature_groups);
    return p;
}

CivilDate require_date(const std::string& value, const std::string& what) {
    auto d = parse_date(value);
    if (!d) throw DataError("bad or missing date for " + what + ": '" + value + "'");
    return *d;
}

std::vector<CivilDate> date_range(const CivilDate& a, const CivilDate& b) {
    std::vector<CivilDate> days;
    for (std::int64_t d = days_from_civil(a); d <= days_from_civil(b); ++d)
        days.push_back(civil_from_days(d));
    return days;
}

FoldSpec single_fold(const RunConfig& cfg) {
    FoldSpec f;
    f.entity = cfg.fold_entity;
    f.t_p = cfg.fold_tp;
    f.k = cfg.fold_k;
    f.train_start = require_date(cfg.fold_train_start, "fold.train_start");
    f.train_end = require_date(cfg.fold_train_end, "fold.train_end");
    if (!is_valid_tp(f.t_p)) throw DataError("fold.t_p must be one of 0,4,8,12,16,20");
    return f;
}

int cmd_validate(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const Corpus c = load_corpus(cfg);
    fs::create_directories(cfg.output_dir);
    c.news_rejects.write_csv(cfg.output_dir + "/news_rejects.csv");
    c.social_rejects.write_csv(cfg.output_dir + "/social_rejects.csv");

    std::cout << "registry: " << c.registry.size() << " entities\n";
    std::cout << "news: " << c.index.docs().size() << " documents accepted, "
              << c.news_rejects.hard_count() << " rejected, "
              << (c.news_rejects.lines.size() - c.news_rejects.hard_count()) << " warnings\n";
    if (auto cov = c.index.coverage())
        std::cout << "news coverage: " << to_string(cov->first) << " .. "
                  << to_string(cov->second) << "\n";
    std::cout << "social rejects: " << c.social_rejects.hard_count() << "\n";
    for (const auto& e : c.registry.entries()) {
        std::int64_t mentions = 0;
        auto it = c.social.find(e.id);
        if (it != c.social.end())
            for (const auto& [day, hours] : it->second.raw())
                for (int h = 0; h < 24; ++h) mentions += hours[h];
        std::cout << "  " << e.id << ": mentions=" << mentions << "\n";
    }
    std::cout << "rejects reports written to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_synth(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const SynthResult r = generate(cfg.synth, cfg.output_dir);
    std::cout << "wrote " << r.paths.news_jsonl << "\n"
              << "wrote " << r.paths.social_csv << "\n"
              << "wrote " << r.paths.registry_json << "\n"
              << "wrote " << r.paths.lexicon_csv << "\n"
              << "wrote " << r.paths.manifest_json << "\n";
    return 0;
}

int cmd_featurize(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const Corpus c = load_corpus(cfg, /*need_social=*/false);
    const FoldSpec fold = single_fold(cfg);
    if (!c.registry.has(fold.entity)) throw DataError("unknown entity: " + fold.entity);

    const std::vector<CivilDate> train_days = date_range(fold.train_start, fold.train_end);
    const FeatureContext ctx = FeatureContext::fit(c.index, c.lexicon, fold.entity, train_days,
                                                   fold.t_p, cfg.featurize);

    const CivilDate start = cfg.range_start.empty() ? fold.train_start
                                                    : require_date(cfg.range_start, "fold.range_start");
    const CivilDate end =
        cfg.range_end.empty() ? fold.train_end : require_date(cfg.range_end, "fold.range_end");
    std::vector<std::tuple<std::string, CivilDate, FeatureVector>> rows;
    for (const CivilDate& day : date_range(start, end))
        rows.emplace_back(fold.entity, day, ctx.assemble(c.index, day));

    fs::create_directories(cfg.output_dir);
    const std::string path = cfg.output_dir + "/features.csv";
    write_feature_matrix_csv(rows, path);
    std::cout << "wrote " << path << " (" << rows.size() << " rows x " << layout::kDim
              << " features)\n";
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const Corpus c = load_corpus(cfg);
    const FoldSpec fold = single_fold(cfg);
    if (!c.registry.has(fold.entity)) throw DataError("unknown entity: " + fold.entity);

    const ModelBundle bundle = fit_fold(c.index, c.social, c.lexicon, fold, backtest_params(cfg));
    const std::string path =
        cfg.model_path.empty() ? cfg.output_dir + "/model.npb" : cfg.model_path;
    fs::create_directories(fs::path(path).parent_path().empty()
                               ? "."
                               : fs::path(path).parent_path().string());
    bundle.save(path);
    std::cout << "wrote " << path << " (entity=" << bundle.entity_id << " t_p=" << bundle.t_p
              << " k=" << bundle.policy.k << " delta=" << bundle.policy.delta << ")\n";
    if (bundle.model.single_class_warning)
        std::cout << "warning: training fold contains a single class\n";
    return 0;
}

int cmd_predict(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    if (cfg.model_path.empty()) throw DataError("predict needs fold.model = <bundle path>");
    const ModelBundle bundle = ModelBundle::load(cfg.model_path);
    if (!cfg.fold_entity.empty() && cfg.fold_entity != bundle.entity_id)
        throw DataError("bundle was trained for entity '" + bundle.entity_id +
                        "', refusing to predict for '" + cfg.fold_entity + "'");

    const Corpus c = load_corpus(cfg);
    if (!c.registry.has(bundle.entity_id))
        throw DataError("bundle entity not in registry: " + bundle.entity_id);

    const CivilDate start = require_date(cfg.range_start, "fold.range_start");
    const CivilDate end = require_date(cfg.range_end, "fold.range_end");
    const std::vector<CivilDate> days = date_range(start, end);
    const std::vector<DayPrediction> preds = score_days(bundle, c.index, c.social, days);

    FoldResult result;
    result.spec.entity = bundle.entity_id;
    result.spec.t_p = bundle.t_p;
    result.spec.k = bundle.policy.k;
    result.delta = bundle.policy.delta;
    result.days = preds;
    for (const auto& d : preds) result.counts.add(d.label, d.prediction);

    fs::create_directories(cfg.output_dir);
    const std::string path = cfg.output_dir + "/predictions.csv";
    write_predictions_csv({result}, path);
    std::cout << "wrote " << path << " (" << preds.size() << " days, f1="
              << f1_positive(result.counts) << ")\n";
    return 0;
}

int cmd_backtest(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const Corpus c = load_corpus(cfg);
    const std::vector<std::string> entities = resolve_entities(cfg, c.registry);

    const std::vector<FoldSpec> folds =
        make_folds(cfg.test_year, cfg.tp_grid, cfg.k_grid, entities, c.index.coverage(),
                   cfg.first_month, cfg.last_month);
    const int expected = cfg.last_month - cfg.first_month + 1;
    const BacktestReport report =
        run_backtest(c.index, c.social, c.lexicon, folds, backtest_params(cfg), expected);

    fs::create_directories(cfg.output_dir);
    write_report_csv(report.settings, cfg.output_dir + "/report.csv");
    write_report_markdown(report.settings, cfg.output_dir + "/report.md");
    write_predictions_csv(report.folds, cfg.output_dir + "/predictions.csv");
    write_folds_csv(report.folds, cfg.output_dir + "/folds.csv");
    std::cout << render_report_table(report.settings);
    std::cout << "\nwrote " << cfg.output_dir
              << "/report.csv, report.md, predictions.csv, folds.csv\n";
    return 0;
}

int cmd_ablate(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const Corpus c = load_corpus(cfg);
    const std::vector<std::string> entities = resolve_entities(cfg, c.registry);

    const int tp_grid[] = {cfg.ablate_tp};
    const double k_grid[] = {cfg.ablate_k};
    const std::vector<FoldSpec> folds =
        make_folds(cfg.test_year, tp_grid, k_grid, entities, c.index.coverage(), cfg.first_month,
                   cfg.last_month);
    const int expected = cfg.last_month - cfg.first_month + 1;

    const std::vector<FeatureGroupSet> variants = {
        FeatureGroupSet::of({FeatureGroup::signal}),
        FeatureGroupSet::of({FeatureGroup::textual}),
        FeatureGroupSet::of({FeatureGroup::sentiment}),
        FeatureGroupSet::of({FeatureGroup::semantic}),
        FeatureGroupSet::all(),
    };
    BacktestParams params = backtest_params(cfg);
    const std::vector<BacktestReport> reports =
        run_backtest_variants(c.index, c.social, c.lexicon, folds, params, variants, expected);

    std::vector<AblationRow> rows;
    for (std::size_t vi = 0; vi < variants.size(); ++vi)
        for (const auto& s : reports[vi].settings)
            rows.push_back({s.entity, variants[vi].to_string(), s.t_p, s.k, s.counts});

    fs::create_directories(cfg.output_dir);
    write_ablation_csv(rows, cfg.output_dir + "/ablation.csv");
    write_ablation_svg(rows, cfg.output_dir + "/ablation.svg");
    for (const auto& r : rows)
        std::cout << r.entity << " [" << r.groups << "] f1=" << f1_positive(r.counts) << "\n";
    std::cout << "wrote " << cfg.output_dir << "/ablation.csv, ablation.svg\n";
    return 0;
}

int cmd_report(const CommonArgs& args, const std::string& report_csv) {
    const RunConfig cfg = load_config(args);
    std::ifstream in(report_csv);
    if (!in) throw DataError("cannot open report: " + report_csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<SettingRow> settings;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (cells.size() < 7) throw DataError("report row too short: " + line);
        SettingRow r;
        r.entity = cells[0];
        r.t_p = std::stoi(cells[1]);
        r.k = std::stod(cells[2]);
        r.counts.tp = std::stoll(cells[3]);
        r.counts.fp = std::stoll(cells[4]);
        r.counts.fn = std::stoll(cells[5]);
        r.counts.tn = std::stoll(cells[6]);
        settings.push_back(std::move(r));
    }
    fs::create_directories(cfg.output_dir);
    write_report_markdown(settings, cfg.output_dir + "/report.md");
    std::cout << render_report_table(settings);
    std::cout << "\nwrote " << cfg.output_dir << "/report.md\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"newspop - entity popularity prediction from the news cycle"};
    app.require_subcommand(1);

    CommonArgs validate_args, synth_args, featurize_args, train_args, predict_args, backtest_args,
        ablate_args, report_args;
    std::string report_csv;

    add_common(app.add_subcommand("validate", "load and validate corpus files"), validate_args);
    add_common(app.add_subcommand("synth", "generate a synthetic corpus"), synth_args);
    add_common(app.add_subcommand("featurize", "export the feature matrix for one entity/fold"),
               featurize_args);
    add_common(app.add_subcommand("train", "train one fold and save the model bundle"),
               train_args);
    add_common(app.add_subcommand("predict", "score a date range with a model bundle"),
               predict_args);
    add_common(app.add_subcommand("backtest", "run the sliding-window grid evaluation"),
               backtest_args);
    add_common(app.add_subcommand("ablate", "per-feature-group backtest at one t_p/k"),
               ablate_args);
    CLI::App* report_cmd = app.add_subcommand("report", "render a report CSV as markdown");
    add_common(report_cmd, report_args);
    report_cmd->add_option("--report-csv", report_csv, "report.csv from a backtest run")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1
    }

    try {
        if (app.got_subcommand("validate")) return cmd_validate(validate_args);
        if (app.got_subcommand("synth")) return cmd_synth(synth_args);
        if (app.got_subcommand("featurize")) return cmd_featurize(featurize_args);
        if (app.got_subcommand("train")) return cmd_train(train_args);
        if (app.got_subcommand("predict")) return cmd_predict(predict_args);
        if (app.got_subcommand("backtest")) return cmd_backtest(backtest_args);
        if (app.got_subcommand("ablate")) return cmd_ablate(ablate_args);
        if (app.got_subcommand("report")) return cmd_report(report_args, report_csv);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
