#include <doctest.h>

#include "newspop/config.hpp"
#include "test_util.hpp"

using namespace newspop;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("config file parsing with sections and comments") {
    TempDir tmp("cfg1");
    write_file(tmp.file("run.conf"),
               "# demo configuration\n"
               "[paths]\n"
               "news = data/news.jsonl\n"
               "registry = data/registry.json\n"
               "output_dir = results\n"
               "\n"
               "[run]\n"
               "entities = e1, e2\n"
               "test_year = 2015\n"
               "tp_grid = 0,12\n"
               "k_grid = 0.5\n"
               "jobs = 3   # trailing comment\n"
               "\n"
               "[classifier]\n"
               "c = 0.5\n"
               "max_iterations = 100\n"
               "\n"
               "[lda]\n"
               "train_sweeps = 50\n"
               "\n"
               "[synth]\n"
               "months = 28\n"
               "start = 2013-02-01\n");
    const RunConfig cfg = RunConfig::load(tmp.file("run.conf"), {});
    CHECK(cfg.news_path == "data/news.jsonl");
    CHECK(cfg.output_dir == "results");
    CHECK(cfg.entities == std::vector<std::string>{"e1", "e2"});
    CHECK(cfg.tp_grid == std::vector<int>{0, 12});
    CHECK(cfg.k_grid == std::vector<double>{0.5});
    CHECK(cfg.jobs == 3);
    CHECK(cfg.train.C == 0.5);
    CHECK(cfg.train.max_iterations == 100);
    CHECK(cfg.featurize.lda.train_sweeps == 50);
    CHECK(cfg.synth.months == 28);
    CHECK(cfg.synth.start == CivilDate{2013, 2, 1});
    // untouched defaults survive
    CHECK(cfg.train.tolerance == 1e-6);
    CHECK(cfg.featurize.max_vocab_terms == 10000);
}

TEST_CASE("flag overrides win over file values") {
    TempDir tmp("cfg2");
    write_file(tmp.file("run.conf"), "[run]\njobs = 2\ntest_year = 2015\n");
    const RunConfig cfg =
        RunConfig::load(tmp.file("run.conf"), {"run.jobs=8", "classifier.c=3.5"});
    CHECK(cfg.jobs == 8);
    CHECK(cfg.test_year == 2015);
    CHECK(cfg.train.C == 3.5);
}

TEST_CASE("config errors are data errors") {
    TempDir tmp("cfg3");
    CHECK_THROWS_AS(RunConfig::load(tmp.file("missing.conf"), {}), DataError);
    write_file(tmp.file("bad.conf"), "[run]\nthis line has no equals\n");
    CHECK_THROWS_AS(RunConfig::load(tmp.file("bad.conf"), {}), DataError);
    write_file(tmp.file("badint.conf"), "[run]\njobs = many\n");
    CHECK_THROWS_AS(RunConfig::load(tmp.file("badint.conf"), {}), DataError);
    CHECK_THROWS_AS(RunConfig::from_overrides({"no_equals_sign"}), DataError);
}
