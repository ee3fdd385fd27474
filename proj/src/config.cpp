#include "newspop/config.hpp"

#include <fstream>
#include <map>

namespace newspop {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using KvMap = std::map<std::string, std::string>;

void parse_into(const std::string& path, KvMap& kv) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        kv[section.empty() ? key : section + "." + key] = value;
    }
}

void apply_overrides(const std::vector<std::string>& overrides, KvMap& kv) {
    for (const auto& o : overrides) {
        const std::size_t eq = o.find('=');
        if (eq == std::string::npos) throw DataError("override must be section.key=value: " + o);
        kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        return std::stoi(v);
    } catch (...) {
        throw DataError("config: bad integer for " + key + ": " + v);
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        return std::stod(v);
    } catch (...) {
        throw DataError("config: bad number for " + key + ": " + v);
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        return std::stoull(v);
    } catch (...) {
        throw DataError("config: bad unsigned for " + key + ": " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw DataError("config: bad boolean for " + key + ": " + v);
}

std::vector<std::string> split_csv(const std::string& v) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t c = v.find(',', pos);
        std::string item = trim(v.substr(pos, c == std::string::npos ? c : c - pos));
        if (!item.empty()) out.push_back(std::move(item));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

CivilDate to_date(const std::string& key, const std::string& v) {
    auto d = parse_date(v);
    if (!d) throw DataError("config: bad date for " + key + ": " + v);
    return *d;
}

RunConfig build(const KvMap& kv) {
    RunConfig c;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (auto* v = get("paths.news")) c.news_path = *v;
    if (auto* v = get("paths.social")) c.social_path = *v;
    if (auto* v = get("paths.registry")) c.registry_path = *v;
    if (auto* v = get("paths.lexicon")) c.lexicon_path = *v;
    if (auto* v = get("paths.output_dir")) c.output_dir = *v;

    if (auto* v = get("run.entities")) c.entities = split_csv(*v);
    if (auto* v = get("run.test_year")) c.test_year = to_int("run.test_year", *v);
    if (auto* v = get("run.first_month")) c.first_month = to_int("run.first_month", *v);
    if (auto* v = get("run.last_month")) c.last_month = to_int("run.last_month", *v);
    if (auto* v = get("run.tp_grid")) {
        c.tp_grid.clear();
        for (const auto& s : split_csv(*v)) c.tp_grid.push_back(to_int("run.tp_grid", s));
    }
    if (auto* v = get("run.k_grid")) {
        c.k_grid.clear();
        for (const auto& s : split_csv(*v)) c.k_grid.push_back(to_double("run.k_grid", s));
    }
    if (auto* v = get("run.feature_groups")) c.feature_groups = *v;
    if (auto* v = get("run.jobs")) c.jobs = to_int("run.jobs", *v);

    if (auto* v = get("classifier.c")) c.train.C = to_double("classifier.c", *v);
    if (auto* v = get("classifier.tolerance"))
        c.train.tolerance = to_double("classifier.tolerance", *v);
    if (auto* v = get("classifier.max_iterations"))
        c.train.max_iterations = to_int("classifier.max_iterations", *v);
    if (auto* v = get("classifier.fit_intercept"))
        c.train.fit_intercept = to_bool("classifier.fit_intercept", *v);

    if (auto* v = get("lda.alpha")) c.featurize.lda.alpha = to_double("lda.alpha", *v);
    if (auto* v = get("lda.beta")) c.featurize.lda.beta = to_double("lda.beta", *v);
    if (auto* v = get("lda.train_sweeps"))
        c.featurize.lda.train_sweeps = to_int("lda.train_sweeps", *v);
    if (auto* v = get("lda.foldin_sweeps"))
        c.featurize.lda.foldin_sweeps = to_int("lda.foldin_sweeps", *v);
    if (auto* v = get("lda.seed")) c.featurize.lda.seed = to_u64("lda.seed", *v);

    if (auto* v = get("svd.seed")) c.featurize.svd_seed = to_u64("svd.seed", *v);
    if (auto* v = get("svd.oversample")) c.featurize.svd.oversample = to_int("svd.oversample", *v);
    if (auto* v = get("svd.max_power_iterations"))
        c.featurize.svd.max_power_iterations = to_int("svd.max_power_iterations", *v);
    if (auto* v = get("svd.power_tolerance"))
        c.featurize.svd.power_tolerance = to_double("svd.power_tolerance", *v);
    if (auto* v = get("svd.dense_limit")) c.featurize.svd.dense_limit = to_int("svd.dense_limit", *v);

    if (auto* v = get("vocab.max_terms"))
        c.featurize.max_vocab_terms = static_cast<std::size_t>(to_int("vocab.max_terms", *v));
    if (auto* v = get("vocab.stopword_file")) {
        std::ifstream words(*v);
        if (!words) throw DataError("cannot open stopword file: " + *v);
        std::string w;
        while (std::getline(words, w)) {
            const std::string t = trim(w);
            if (!t.empty()) c.featurize.stopwords.insert(t);
        }
    }

    if (auto* v = get("fold.entity")) c.fold_entity = *v;
    if (auto* v = get("fold.t_p")) c.fold_tp = to_int("fold.t_p", *v);
    if (auto* v = get("fold.k")) c.fold_k = to_double("fold.k", *v);
    if (auto* v = get("fold.train_start")) c.fold_train_start = *v;
    if (auto* v = get("fold.train_end")) c.fold_train_end = *v;
    if (auto* v = get("fold.range_start")) c.range_start = *v;
    if (auto* v = get("fold.range_end")) c.range_end = *v;
    if (auto* v = get("fold.model")) c.model_path = *v;

    if (auto* v = get("ablate.t_p")) c.ablate_tp = to_int("ablate.t_p", *v);
    if (auto* v = get("ablate.k")) c.ablate_k = to_double("ablate.k", *v);

    if (auto* v = get("synth.seed")) c.synth.seed = to_u64("synth.seed", *v);
    if (auto* v = get("synth.entities")) c.synth.n_entities = to_int("synth.entities", *v);
    if (auto* v = get("synth.start")) c.synth.start = to_date("synth.start", *v);
    if (auto* v = get("synth.months")) c.synth.months = to_int("synth.months", *v);
    if (auto* v = get("synth.signal_strength"))
        c.synth.signal_strength = to_double("synth.signal_strength", *v);
    if (auto* v = get("synth.burst_probability"))
        c.synth.burst_probability = to_double("synth.burst_probability", *v);
    if (auto* v = get("synth.base_volume_max"))
        c.synth.base_volume_max = to_int("synth.base_volume_max", *v);
    if (auto* v = get("synth.burst_volume_min"))
        c.synth.burst_volume_min = to_int("synth.burst_volume_min", *v);
    if (auto* v = get("synth.burst_volume_max"))
        c.synth.burst_volume_max = to_int("synth.burst_volume_max", *v);
    if (auto* v = get("synth.mention_scale"))
        c.synth.mention_scale = to_double("synth.mention_scale", *v);
    if (auto* v = get("synth.noise_scale"))
        c.synth.noise_scale = to_double("synth.noise_scale", *v);
    if (auto* v = get("synth.lexicon_injection_rate"))
        c.synth.lexicon_injection_rate = to_double("synth.lexicon_injection_rate", *v);
    if (auto* v = get("synth.title_words")) c.synth.title_words = to_int("synth.title_words", *v);
    if (auto* v = get("synth.title_words_min"))
        c.synth.title_words_min = to_int("synth.title_words_min", *v);
    if (auto* v = get("synth.vocab_words")) c.synth.vocab_words = to_int("synth.vocab_words", *v);
    if (auto* v = get("synth.sources")) c.synth.sources = to_int("synth.sources", *v);
    if (auto* v = get("synth.tag_count")) c.synth.tag_count = to_int("synth.tag_count", *v);

    return c;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path, const std::vector<std::string>& overrides) {
    KvMap kv;
    parse_into(path, kv);
    apply_overrides(overrides, kv);
    return build(kv);
}

RunConfig RunConfig::from_overrides(const std::vector<std::string>& overrides) {
    KvMap kv;
    apply_overrides(overrides, kv);
    return build(kv);
}

}  // namespace newspop
