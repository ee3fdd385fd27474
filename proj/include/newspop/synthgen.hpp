#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newspop/civil.hpp"

namespace newspop {

// Synthetic news + social corpus with a plantable news -> popularity link.
// Daily news volume follows a two-state bursty process; next-window mentions
// are signal_strength * (mention_scale * pre-noon volume) plus
// (1 - signal_strength) * uniform noise. With signal_strength = 1 the label
// is a deterministic monotone function of the morning news volume.
struct SynthConfig {
    std::uint64_t seed = 1;
    int n_entities = 3;
    CivilDate start{2013, 1, 1};
    int months = 30;  // >= 26 gives a 24-month training horizon plus test months

    double signal_strength = 1.0;  // lambda in [0,1]
    double burst_probability = 0.5;
    int base_volume_max = 3;
    int burst_volume_min = 8;
    int burst_volume_max = 15;
    double mention_scale = 10.0;
    double noise_scale = 150.0;

    double lexicon_injection_rate = 0.3;  // polar words planted on burst/calm titles
    int title_words = 4;      // words per title; uniform in [title_words_min, title_words]
    int title_words_min = 0;  // 0 = fixed title_words
    int body_words_min = 12;
    int body_words_max = 40;
    int vocab_words = 500;
    int sources = 6;
    int tag_count = 12;
    int tags_per_doc_max = 2;
    int other_entities_max = 2;
};

struct SynthPaths {
    std::string news_jsonl;
    std::string social_csv;
    std::string registry_json;
    std::string lexicon_csv;
    std::string manifest_json;
};

struct SynthDayTruth {
    std::string entity;
    CivilDate date;
    int burst = 0;
    int volume = 0;           // articles before noon
    std::int64_t mentions = 0;  // total that day (all in hours 12-23)
};

struct SynthResult {
    SynthPaths paths;
    std::vector<std::string> entity_ids;
    std::vector<SynthDayTruth> truth;
};

// Writes news.jsonl, social.csv, registry.json, lexicon.csv and
// manifest.json under out_dir. Byte-identical output for identical configs.
SynthResult generate(const SynthConfig& config, const std::string& out_dir);

}  // namespace newspop
