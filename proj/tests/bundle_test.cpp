#include <doctest.h>

#include "newspop/backtest.hpp"
#include "newspop/bundle.hpp"
#include "newspop/synthgen.hpp"
#include "test_util.hpp"

using namespace newspop;
using testutil::TempDir;

namespace {

struct Pipeline {
    EntityRegistry registry;
    CorpusIndex index;
    std::map<std::string, MentionSeries> social;
    SentimentLexicon lexicon;
};

Pipeline load_synth(const TempDir& tmp, std::uint64_t seed, double lambda) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_entities = 2;
    cfg.months = 26;
    cfg.signal_strength = lambda;
    cfg.title_words = 3;
    cfg.vocab_words = 120;
    const SynthResult r = generate(cfg, tmp.dir() + "/corpus");
    Pipeline p;
    p.registry = load_registry(r.paths.registry_json);
    p.index = load_news(r.paths.news_jsonl, p.registry).index;
    p.social = load_social(r.paths.social_csv, p.registry).series;
    p.lexicon = SentimentLexicon::load(r.paths.lexicon_csv);
    return p;
}

BacktestParams quick_params() {
    BacktestParams p;
    p.featurize.lda.train_sweeps = 15;
    p.featurize.lda.foldin_sweeps = 10;
    p.featurize.max_vocab_terms = 500;
    p.featurize.svd.max_power_iterations = 12;
    return p;
}

FoldSpec small_fold(const std::string& entity) {
    FoldSpec f;
    f.entity = entity;
    f.test_year = 2015;
    f.test_month = 1;
    f.train_start = {2014, 10, 1};  // short window keeps the test fast
    f.train_end = {2014, 12, 31};
    f.t_p = 12;
    f.k = 0.5;
    return f;
}

}  // namespace

TEST_CASE("bundle round-trips and reproduces predictions bit-for-bit") {
    TempDir tmp("bundle1");
    const Pipeline p = load_synth(tmp, 31, 1.0);
    const FoldSpec fold = small_fold("e1");
    const BacktestParams params = quick_params();

    const ModelBundle bundle = fit_fold(p.index, p.social, p.lexicon, fold, params);
    const std::string path = tmp.file("model.npb");
    bundle.save(path);
    const ModelBundle loaded = ModelBundle::load(path);

    CHECK(loaded.entity_id == bundle.entity_id);
    CHECK(loaded.t_p == bundle.t_p);
    CHECK(loaded.policy.delta == bundle.policy.delta);
    CHECK(loaded.model.w == bundle.model.w);
    CHECK(loaded.context.lda.phi().a == bundle.context.lda.phi().a);
    CHECK(loaded.context.title_tfidf.vocabulary().terms() ==
          bundle.context.title_tfidf.vocabulary().terms());

    const FoldResult direct = score_fold(bundle, p.index, p.social, fold);
    const FoldResult reloaded = score_fold(loaded, p.index, p.social, fold);
    REQUIRE(direct.days.size() == reloaded.days.size());
    for (std::size_t i = 0; i < direct.days.size(); ++i) {
        CHECK(direct.days[i].probability == reloaded.days[i].probability);
        CHECK(direct.days[i].prediction == reloaded.days[i].prediction);
        CHECK(direct.days[i].label == reloaded.days[i].label);
    }

    SUBCASE("serialization is deterministic") {
        const ModelBundle again = fit_fold(p.index, p.social, p.lexicon, fold, params);
        CHECK(again.serialize() == bundle.serialize());
    }
    SUBCASE("corrupted magic is refused") {
        std::vector<std::uint8_t> bytes = bundle.serialize();
        bytes[0] = 'X';
        CHECK_THROWS_AS(ModelBundle::deserialize(bytes), DataError);
    }
}

TEST_CASE("run_fold equals fit_fold + score_fold") {
    TempDir tmp("bundle2");
    const Pipeline p = load_synth(tmp, 32, 1.0);
    const FoldSpec fold = small_fold("e2");
    const BacktestParams params = quick_params();
    const FoldResult a = run_fold(p.index, p.social, p.lexicon, fold, params);
    const FoldResult b =
        score_fold(fit_fold(p.index, p.social, p.lexicon, fold, params), p.index, p.social, fold);
    REQUIRE(a.days.size() == b.days.size());
    for (std::size_t i = 0; i < a.days.size(); ++i)
        CHECK(a.days[i].probability == b.days[i].probability);
}
