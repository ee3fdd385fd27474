// End-to-end checks of the newspop binary: exit codes, file outputs, and
// train/predict parity with the backtest. The binary path arrives as argv[1].

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "test_util.hpp"

namespace {

std::string g_binary;

int run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string base_config(const std::string& dir, const std::string& out) {
    return "[paths]\n"
           "news = " + dir + "/news.jsonl\n"
           "social = " + dir + "/social.csv\n"
           "registry = " + dir + "/registry.json\n"
           "lexicon = " + dir + "/lexicon.csv\n"
           "output_dir = " + out + "\n"
           "[run]\n"
           "test_year = 2015\n"
           "first_month = 1\n"
           "last_month = 2\n"
           "tp_grid = 12\n"
           "k_grid = 0.5\n"
           "jobs = 2\n"
           "[lda]\n"
           "train_sweeps = 10\n"
           "foldin_sweeps = 10\n"
           "[vocab]\n"
           "max_terms = 300\n"
           "[svd]\n"
           "max_power_iterations = 10\n"
           "[synth]\n"
           "seed = 21\n"
           "entities = 2\n"
           "months = 26\n"
           "signal_strength = 1.0\n"
           "title_words = 3\n"
           "vocab_words = 100\n"
           "[fold]\n"
           "entity = e1\n"
           "t_p = 12\n"
           "k = 0.5\n"
           "train_start = 2013-01-01\n"
           "train_end = 2014-12-31\n"
           "range_start = 2015-01-01\n"
           "range_end = 2015-01-31\n";
}

}  // namespace

TEST_CASE("cli end to end") {
    testutil::TempDir tmp("cli");
    const std::string corpus = tmp.dir() + "/corpus";
    const std::string out = tmp.dir() + "/out";
    const std::string cfg = tmp.file("run.conf");
    testutil::write_file(cfg, base_config(corpus, out));

    SUBCASE("usage errors exit 1") {
        CHECK(run("definitely-not-a-command") == 1);
        CHECK(run("predict --bogus-flag") == 1);
        CHECK(run("") == 1);
    }

    SUBCASE("missing files exit 2") {
        CHECK(run("validate --config " + cfg) == 2);          // corpus not generated yet
        CHECK(run("backtest --config " + tmp.file("no.conf")) == 2);
    }

    SUBCASE("full pipeline") {
        REQUIRE(run("synth --config " + cfg + " --set paths.output_dir=" + corpus) == 0);
        CHECK(std::filesystem::exists(corpus + "/news.jsonl"));

        CHECK(run("validate --config " + cfg) == 0);
        CHECK(std::filesystem::exists(out + "/news_rejects.csv"));

        // a corrupted line is a soft reject, not a structural failure
        {
            std::ofstream append(corpus + "/news.jsonl", std::ios::app);
            append << "{this is not json}\n";
        }
        CHECK(run("validate --config " + cfg) == 0);
        const std::string rejects = testutil::read_file(out + "/news_rejects.csv");
        CHECK(rejects.find("malformed JSON") != std::string::npos);

        REQUIRE(run("backtest --config " + cfg) == 0);
        CHECK(std::filesystem::exists(out + "/report.csv"));
        CHECK(std::filesystem::exists(out + "/report.md"));
        CHECK(std::filesystem::exists(out + "/predictions.csv"));
        const std::string folds_csv = testutil::read_file(out + "/folds.csv");
        CHECK(folds_csv.find("entity,t_p,k,test_month,delta,") == 0);
        // 2 entities x 1 t_p x 1 k x 2 months
        CHECK(std::count(folds_csv.begin(), folds_csv.end(), '\n') == 1 + 4);

        // deterministic reruns: byte-identical reports
        const std::string report1 = testutil::read_file(out + "/report.csv");
        const std::string pred1 = testutil::read_file(out + "/predictions.csv");
        REQUIRE(run("backtest --config " + cfg) == 0);
        CHECK(testutil::read_file(out + "/report.csv") == report1);
        CHECK(testutil::read_file(out + "/predictions.csv") == pred1);

        // train + predict reproduce the January fold rows exactly
        REQUIRE(run("train --config " + cfg + " --set fold.model=" + tmp.file("m.npb")) == 0);
        REQUIRE(run("predict --config " + cfg + " --set fold.model=" + tmp.file("m.npb") +
                    " --set paths.output_dir=" + tmp.dir() + "/pred_out") == 0);
        const std::string pred_rows =
            testutil::read_file(tmp.dir() + "/pred_out/predictions.csv");
        std::size_t matched = 0;
        std::size_t pos = pred_rows.find('\n') + 1;  // skip header
        while (pos < pred_rows.size()) {
            std::size_t end = pred_rows.find('\n', pos);
            if (end == std::string::npos) break;
            const std::string row = pred_rows.substr(pos, end - pos);
            if (pred1.find(row) != std::string::npos) ++matched;
            pos = end + 1;
        }
        CHECK(matched == 31);  // every January day matches the backtest byte-for-byte

        // refusing to predict for another entity
        CHECK(run("predict --config " + cfg + " --set fold.model=" + tmp.file("m.npb") +
                  " --set fold.entity=e2") == 2);

        // featurize exports the feature matrix
        REQUIRE(run("featurize --config " + cfg) == 0);
        const std::string feats = testutil::read_file(out + "/features.csv");
        CHECK(feats.find("entity,date,signal_news") == 0);

        // backtest restricted to one feature group
        REQUIRE(run("backtest --config " + cfg + " --set run.feature_groups=semantic" +
                    " --set paths.output_dir=" + tmp.dir() + "/sem_out") == 0);
        CHECK(std::filesystem::exists(tmp.dir() + "/sem_out/report.csv"));

        // ablation restricted to one group set
        REQUIRE(run("ablate --config " + cfg) == 0);
        const std::string ab = testutil::read_file(out + "/ablation.csv");
        CHECK(ab.find("entity,feature_groups,t_p,k,") == 0);
        CHECK(ab.find("semantic") != std::string::npos);
        CHECK(std::filesystem::exists(out + "/ablation.svg"));

        // report renders markdown from the CSV
        CHECK(run("report --report-csv " + out + "/report.csv --set paths.output_dir=" + out) ==
              0);

        // insufficient history names the feasible month (data error)
        CHECK(run("backtest --config " + cfg + " --set run.test_year=2014") == 2);
    }
}

int main(int argc, char** argv) {
    if (argc > 1) g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
