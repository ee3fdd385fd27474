#pragma once

#include <string>
#include <vector>

#include "newspop/backtest.hpp"
#include "newspop/synthgen.hpp"

namespace newspop {

// Full run configuration: a plain-text file of `key = value` lines under
// [section] headers, with `#` comments. CLI flags arrive as extra
// "section.key=value" overrides and win over file values.
struct RunConfig {
    // [paths]
    std::string news_path;
    std::string social_path;
    std::string registry_path;
    std::string lexicon_path;
    std::string output_dir = "out";

    // [run]
    std::vector<std::string> entities;  // empty = every registry entity
    int test_year = 2015;
    int first_month = 1;
    int last_month = 12;
    std::vector<int> tp_grid = {0, 4, 8, 12, 16, 20};
    std::vector<double> k_grid = {0.5, 0.65, 0.8};
    std::string feature_groups = "all";
    int jobs = 0;  // 0 = available parallelism

    // [classifier] [lda] [svd] [vocab]
    TrainConfig train;
    FeaturizeParams featurize;

    // [fold] - single-fold commands (featurize/train/predict)
    std::string fold_entity;
    int fold_tp = 12;
    double fold_k = 0.5;
    std::string fold_train_start = "2013-01-01";
    std::string fold_train_end = "2014-12-31";
    std::string range_start;  // featurize/predict day range
    std::string range_end;
    std::string model_path;

    // [ablate]
    int ablate_tp = 12;
    double ablate_k = 0.5;

    // [synth]
    SynthConfig synth;

    static RunConfig load(const std::string& path, const std::vector<std::string>& overrides);
    static RunConfig from_overrides(const std::vector<std::string>& overrides);
};

}  // namespace newspop
