#include "newspop/synthgen.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "newspop/corpus.hpp"
#include "newspop/rng.hpp"

namespace newspop {

using nlohmann::json;

namespace {

std::string word_of(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%04d", i);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    return out;
}

}  // namespace

SynthResult generate(const SynthConfig& config, const std::string& out_dir) {
    if (config.signal_strength < 0.0 || config.signal_strength > 1.0)
        throw DataError("synth: signal_strength must be in [0,1]");
    if (config.months < 26) throw DataError("synth: need at least 26 months of data");
    if (config.n_entities < 1) throw DataError("synth: need at least one entity");

    std::filesystem::create_directories(out_dir);
    SynthResult result;
    result.paths.news_jsonl = out_dir + "/news.jsonl";
    result.paths.social_csv = out_dir + "/social.csv";
    result.paths.registry_json = out_dir + "/registry.json";
    result.paths.lexicon_csv = out_dir + "/lexicon.csv";
    result.paths.manifest_json = out_dir + "/manifest.json";

    // registry
    json registry = json::array();
    for (int e = 0; e < config.n_entities; ++e) {
        const std::string id = "e" + std::to_string(e + 1);
        const std::string canonical = "Entity" + std::to_string(e + 1);
        registry.push_back(
            {{"id", id}, {"canonical", canonical}, {"surface_forms", {canonical, "E" + std::to_string(e + 1) + "x"}}});
        result.entity_ids.push_back(id);
    }
    open_out(result.paths.registry_json) << registry.dump(2) << "\n";

    // lexicon: ten words per polarity
    std::vector<std::string> pos_words, neg_words;
    {
        std::ofstream lex = open_out(result.paths.lexicon_csv);
        lex << "term,polarity\n";
        for (int i = 0; i < 10; ++i) {
            pos_words.push_back("brightword" + std::to_string(i));
            neg_words.push_back("gloomword" + std::to_string(i));
            lex << pos_words.back() << ",positive\n";
            lex << neg_words.back() << ",negative\n";
            lex << "plainword" << i << ",neutral\n";
        }
    }

    const CivilDate first_day = config.start;
    const CivilDate end_month = add_months(config.start, config.months);
    const std::int64_t last_day_num = days_from_civil(end_month) - 1;

    Rng rng(config.seed);
    std::ofstream news = open_out(result.paths.news_jsonl);
    std::ofstream social = open_out(result.paths.social_csv);
    social << "entity_id,date,hour,count\n";

    for (int e = 0; e < config.n_entities; ++e) {
        const std::string& id = result.entity_ids[e];
        const std::string canonical = "Entity" + std::to_string(e + 1);
        for (std::int64_t dn = days_from_civil(first_day); dn <= last_day_num; ++dn) {
            const CivilDate day = civil_from_days(dn);
            const bool burst = rng.uniform_real() < config.burst_probability;
            const int volume = burst
                                   ? rng.uniform_int(config.burst_volume_min, config.burst_volume_max)
                                   : rng.uniform_int(0, config.base_volume_max);

            for (int a = 0; a < volume; ++a) {
                json doc;
                doc["id"] = id + "-" + to_string(day) + "-" + std::to_string(a);
                const int hour = rng.uniform_int(0, 11);
                const CivilDateTime ts{day, hour, rng.uniform_int(0, 59), rng.uniform_int(0, 59)};
                doc["timestamp"] = to_string(ts);
                doc["source"] = "outlet" + std::to_string(rng.uniform_int(1, config.sources));

                std::string title = canonical;
                const int n_words = config.title_words_min > 0
                                        ? rng.uniform_int(config.title_words_min, config.title_words)
                                        : config.title_words;
                for (int wi = 0; wi < n_words; ++wi)
                    title += " " + word_of(rng.uniform_int(0, config.vocab_words - 1));
                if (config.lexicon_injection_rate > 0.0 &&
                    rng.uniform_real() < config.lexicon_injection_rate) {
                    // polar vocabulary tracks the burst state
                    const auto& bank = burst ? pos_words : neg_words;
                    title += " " + bank[rng.uniform_u64(bank.size())];
                }
                doc["title"] = title;

                std::string body;
                const int body_words = rng.uniform_int(config.body_words_min, config.body_words_max);
                for (int wi = 0; wi < body_words; ++wi) {
                    if (wi) body += " ";
                    body += word_of(rng.uniform_int(0, config.vocab_words - 1));
                }
                doc["body"] = body;

                json tags = json::array();
                const int ntags = rng.uniform_int(0, config.tags_per_doc_max);
                for (int ti = 0; ti < ntags; ++ti)
                    tags.push_back("tag" + std::to_string(rng.uniform_int(1, config.tag_count)));
                doc["tags"] = tags;

                json entities = json::array();
                entities.push_back(id);
                const int nothers = config.n_entities > 1 ? rng.uniform_int(0, config.other_entities_max) : 0;
                for (int oi = 0; oi < nothers; ++oi) {
                    const std::string other =
                        "e" + std::to_string(rng.uniform_int(1, config.n_entities));
                    bool dup = false;
                    for (const auto& x : entities) dup = dup || x.get<std::string>() == other;
                    if (!dup) entities.push_back(other);
                }
                doc["entities"] = entities;
                doc["title_entities"] = json::array({id});
                news << doc.dump() << "\n";
            }

            const double noise = rng.uniform_real() * config.noise_scale;
            const double raw = config.signal_strength * config.mention_scale * volume +
                               (1.0 - config.signal_strength) * noise;
            const auto mentions = static_cast<std::int64_t>(std::llround(raw));

            // mentions land in hours 12-23, spread evenly
            for (int h = 12; h < 24; ++h) {
                const std::int64_t share = mentions / 12 + ((h - 12) < mentions % 12 ? 1 : 0);
                if (share > 0)
                    social << id << "," << to_string(day) << "," << h << "," << share << "\n";
            }

            result.truth.push_back(SynthDayTruth{id, day, burst ? 1 : 0, volume, mentions});
        }
    }

    json manifest;
    manifest["seed"] = config.seed;
    manifest["signal_strength"] = config.signal_strength;
    manifest["n_entities"] = config.n_entities;
    manifest["start"] = to_string(config.start);
    manifest["months"] = config.months;
    manifest["burst_probability"] = config.burst_probability;
    manifest["mention_scale"] = config.mention_scale;
    manifest["noise_scale"] = config.noise_scale;
    manifest["lexicon_injection_rate"] = config.lexicon_injection_rate;
    json days = json::array();
    for (const auto& t : result.truth) {
        // bayes_label_k50: the optimal k = 0.5 call knows the burst state
        days.push_back({{"entity", t.entity},
                        {"date", to_string(t.date)},
                        {"burst", t.burst},
                        {"volume", t.volume},
                        {"mentions", t.mentions},
                        {"bayes_label_k50", t.burst}});
    }
    manifest["days"] = days;
    open_out(result.paths.manifest_json) << manifest.dump() << "\n";
    return result;
}

}  // namespace newspop
