#include "newspop/corpus.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "newspop/text.hpp"

namespace newspop {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

}  // namespace

EntityRegistry::EntityRegistry(std::vector<RegistryEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto& e = entries_[i];
        if (e.id.empty()) throw DataError("registry entry with empty id");
        if (!by_id_.emplace(e.id, i).second)
            throw DataError("duplicate entity id in registry: " + e.id);
        std::vector<std::string> kept;
        for (auto& sf : e.surface_forms) {
            std::string t = trim(sf);
            if (!t.empty()) kept.push_back(std::move(t));
        }
        e.surface_forms = std::move(kept);
        if (e.surface_forms.empty())
            throw DataError("entity has no usable surface forms: " + e.id);
        for (const auto& sf : e.surface_forms) {
            std::vector<std::string> toks = split_words(sf);
            if (toks.empty()) throw DataError("surface form has no word tokens: '" + sf +
                                              "' for entity " + e.id);
            std::string head = toks[0];
            matcher_[head].push_back({std::move(toks), i});
        }
    }
}

std::vector<std::string> EntityRegistry::match(const std::string& text) const {
    std::vector<std::string> hits;
    if (matcher_.empty()) return hits;
    const std::vector<std::string> words = split_words(text);
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto it = matcher_.find(words[i]);
        if (it == matcher_.end()) continue;
        for (const auto& [seq, entry_idx] : it->second) {
            if (i + seq.size() > words.size()) continue;
            bool ok = true;
            for (std::size_t j = 1; j < seq.size(); ++j) {
                if (words[i + j] != seq[j]) {
                    ok = false;
                    break;
                }
            }
            if (ok) hits.push_back(entries_[entry_idx].id);
        }
    }
    sort_unique(hits);
    return hits;
}

std::size_t RejectsReport::hard_count() const {
    std::size_t n = 0;
    for (const auto& l : lines)
        if (!l.warning) ++n;
    return n;
}

void RejectsReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write rejects report: " + path);
    out << "line_number,reason\n";
    for (const auto& l : lines) {
        std::string reason = l.warning ? "warning: " + l.reason : l.reason;
        // commas inside reasons get quoted
        if (reason.find(',') != std::string::npos || reason.find('"') != std::string::npos) {
            std::string q = "\"";
            for (char c : reason) {
                if (c == '"') q += "\"\"";
                else q += c;
            }
            q += "\"";
            reason = q;
        }
        out << l.line_number << "," << reason << "\n";
    }
}

CorpusIndex::CorpusIndex(std::vector<NewsDoc> docs) : docs_(std::move(docs)) {
    std::sort(docs_.begin(), docs_.end(), [](const NewsDoc& a, const NewsDoc& b) {
        const auto ta = a.timestamp.epoch_seconds();
        const auto tb = b.timestamp.epoch_seconds();
        return ta != tb ? ta < tb : a.id < b.id;
    });
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        for (const auto& e : docs_[i].entity_ids) by_entity_[e].push_back(i);
        const CivilDate d = docs_[i].timestamp.date;
        if (!coverage_) {
            coverage_ = {d, d};
        } else {
            if (d < coverage_->first) coverage_->first = d;
            if (coverage_->second < d) coverage_->second = d;
        }
    }
}

std::vector<const NewsDoc*> CorpusIndex::entity_news_between(const std::string& entity,
                                                             const CivilDateTime& start,
                                                             const CivilDateTime& end) const {
    std::vector<const NewsDoc*> out;
    auto it = by_entity_.find(entity);
    if (it == by_entity_.end()) return out;
    const std::int64_t s = start.epoch_seconds();
    const std::int64_t e = end.epoch_seconds();
    const auto& idx = it->second;
    auto lo = std::lower_bound(idx.begin(), idx.end(), s, [this](std::size_t i, std::int64_t v) {
        return docs_[i].timestamp.epoch_seconds() < v;
    });
    for (auto p = lo; p != idx.end(); ++p) {
        if (docs_[*p].timestamp.epoch_seconds() > e) break;
        out.push_back(&docs_[*p]);
    }
    return out;
}

std::int64_t CorpusIndex::entity_hour_count(const std::string& entity, const CivilDate& day,
                                            int hour) const {
    return static_cast<std::int64_t>(
        entity_news_between(entity, CivilDateTime{day, hour, 0, 0}, CivilDateTime{day, hour, 59, 59})
            .size());
}

std::int64_t CorpusIndex::entity_day_count(const std::string& entity, const CivilDate& day) const {
    return static_cast<std::int64_t>(
        entity_news_between(entity, CivilDateTime{day, 0, 0, 0}, CivilDateTime{day, 23, 59, 59})
            .size());
}

std::int64_t CorpusIndex::entity_title_day_count(const std::string& entity,
                                                 const CivilDate& day) const {
    std::int64_t n = 0;
    for (const NewsDoc* d :
         entity_news_between(entity, CivilDateTime{day, 0, 0, 0}, CivilDateTime{day, 23, 59, 59}))
        if (std::binary_search(d->title_entity_ids.begin(), d->title_entity_ids.end(), entity)) ++n;
    return n;
}

EntityRegistry load_registry(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw DataError("registry is not a JSON array: " + path);
    std::vector<RegistryEntry> entries;
    try {
        for (const auto& item : j) {
            if (!item.is_object() || !item.contains("id"))
                throw DataError("registry entry missing id in " + path);
            RegistryEntry e;
            e.id = item.at("id").get<std::string>();
            e.canonical = item.value("canonical", e.id);
            if (item.contains("surface_forms"))
                e.surface_forms = item.at("surface_forms").get<std::vector<std::string>>();
            entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw DataError("registry " + path + ": " + e.what());
    }
    return EntityRegistry(std::move(entries));
}

namespace {

// One JSONL news record -> NewsDoc, or a reject reason.
std::optional<NewsDoc> parse_news_line_impl(const json& j, const EntityRegistry& registry,
                                            std::size_t line_no, RejectsReport& rejects) {
    auto fail = [&](const std::string& why) -> std::optional<NewsDoc> {
        rejects.add(line_no, why);
        return std::nullopt;
    };
    if (!j.is_object()) return fail("not a JSON object");
    if (!j.contains("id") || !j.at("id").is_string()) return fail("missing id");
    if (!j.contains("timestamp") || !j.at("timestamp").is_string())
        return fail("missing timestamp");

    NewsDoc doc;
    doc.id = j.at("id").get<std::string>();
    auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
    if (!ts) return fail("unparseable timestamp: " + j.at("timestamp").get<std::string>());
    if (!ts->had_timezone) rejects.warn(line_no, "timestamp missing timezone, assumed UTC");
    doc.timestamp = ts->utc;

    doc.source = j.value("source", "");
    if (doc.source.empty()) return fail("empty source");
    doc.title = j.value("title", "");
    doc.body = j.value("body", "");
    if (j.contains("tags")) {
        if (!j.at("tags").is_array()) return fail("tags is not an array");
        doc.tags = j.at("tags").get<std::vector<std::string>>();
    }

    if (j.contains("entities")) {
        doc.entity_ids = j.at("entities").get<std::vector<std::string>>();
        sort_unique(doc.entity_ids);
        if (j.contains("title_entities")) {
            doc.title_entity_ids = j.at("title_entities").get<std::vector<std::string>>();
            sort_unique(doc.title_entity_ids);
            for (const auto& t : doc.title_entity_ids)
                if (!std::binary_search(doc.entity_ids.begin(), doc.entity_ids.end(), t))
                    return fail("title_entities not a subset of entities: " + t);
        } else {
            for (auto& id : registry.match(doc.title))
                if (std::binary_search(doc.entity_ids.begin(), doc.entity_ids.end(), id))
                    doc.title_entity_ids.push_back(std::move(id));
        }
    } else {
        std::vector<std::string> title_hits = registry.match(doc.title);
        std::vector<std::string> body_hits = registry.match(doc.body);
        doc.title_entity_ids = title_hits;
        doc.entity_ids = std::move(title_hits);
        doc.entity_ids.insert(doc.entity_ids.end(), body_hits.begin(), body_hits.end());
        sort_unique(doc.entity_ids);
    }
    return doc;
}

std::optional<NewsDoc> parse_news_line(const json& j, const EntityRegistry& registry,
                                       std::size_t line_no, RejectsReport& rejects) {
    try {
        return parse_news_line_impl(j, registry, line_no, rejects);
    } catch (const json::exception& e) {
        rejects.add(line_no, std::string("bad field type: ") + e.what());
        return std::nullopt;
    }
}

}  // namespace

NewsLoadResult load_news(const std::string& path, const EntityRegistry& registry) {
    std::ifstream in = open_or_throw(path);
    NewsLoadResult result;
    std::vector<NewsDoc> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            result.rejects.add(line_no, "malformed JSON");
            continue;
        }
        if (auto doc = parse_news_line(j, registry, line_no, result.rejects))
            docs.push_back(std::move(*doc));
    }
    result.index = CorpusIndex(std::move(docs));
    return result;
}

SocialLoadResult load_social(const std::string& path, const EntityRegistry& registry) {
    std::ifstream in = open_or_throw(path);
    SocialLoadResult result;
    for (const auto& e : registry.entries()) result.series.emplace(e.id, MentionSeries(e.id));

    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    bool csv = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (first) {
            first = false;
            csv = t.rfind("entity_id,", 0) == 0;
            if (csv) continue;  // header
        }
        if (csv) {
            // entity_id,date,hour,count
            std::vector<std::string> cells;
            std::size_t pos = 0;
            while (true) {
                std::size_t c = t.find(',', pos);
                cells.push_back(t.substr(pos, c == std::string::npos ? c : c - pos));
                if (c == std::string::npos) break;
                pos = c + 1;
            }
            if (cells.size() != 4) {
                result.rejects.add(line_no, "expected 4 CSV fields");
                continue;
            }
            auto it = result.series.find(cells[0]);
            if (it == result.series.end()) {
                result.rejects.add(line_no, "unknown entity_id: " + cells[0]);
                continue;
            }
            auto date = parse_date(cells[1]);
            if (!date) {
                result.rejects.add(line_no, "bad date: " + cells[1]);
                continue;
            }
            char* endp = nullptr;
            long hour = std::strtol(cells[2].c_str(), &endp, 10);
            if (*endp != '\0' || hour < 0 || hour > 23) {
                result.rejects.add(line_no, "bad hour: " + cells[2]);
                continue;
            }
            long long count = std::strtoll(cells[3].c_str(), &endp, 10);
            if (*endp != '\0') {
                result.rejects.add(line_no, "bad count: " + cells[3]);
                continue;
            }
            if (count < 0) {
                result.rejects.add(line_no, "negative count");
                continue;
            }
            it->second.add(*date, static_cast<int>(hour), count);
        } else {
            json j = json::parse(t, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                result.rejects.add(line_no, "malformed JSON");
                continue;
            }
            if (!j.contains("timestamp") || !j.at("timestamp").is_string()) {
                result.rejects.add(line_no, "missing timestamp");
                continue;
            }
            auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
            if (!ts) {
                result.rejects.add(line_no, "unparseable timestamp");
                continue;
            }
            if (!ts->had_timezone)
                result.rejects.warn(line_no, "timestamp missing timezone, assumed UTC");
            std::string text;
            try {
                text = j.value("text", "");
            } catch (const json::exception&) {
                result.rejects.add(line_no, "text is not a string");
                continue;
            }
            for (const auto& id : registry.match(text))
                result.series.at(id).add(ts->utc.date, ts->utc.hour, 1);
        }
    }
    return result;
}

void write_news_jsonl(const CorpusIndex& index, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write news file: " + path);
    for (const auto& d : index.docs()) {
        json j;
        j["id"] = d.id;
        j["timestamp"] = to_string(d.timestamp);
        j["source"] = d.source;
        j["title"] = d.title;
        j["body"] = d.body;
        j["tags"] = d.tags;
        j["entities"] = d.entity_ids;
        j["title_entities"] = d.title_entity_ids;
        out << j.dump() << "\n";
    }
}

void write_social_csv(const std::map<std::string, MentionSeries>& series,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write social file: " + path);
    out << "entity_id,date,hour,count\n";
    for (const auto& [id, s] : series) {
        std::vector<std::int64_t> days;
        for (const auto& [day, _] : s.raw()) days.push_back(day);
        std::sort(days.begin(), days.end());
        for (std::int64_t day : days) {
            const auto& hours = s.raw().at(day);
            for (int h = 0; h < 24; ++h)
                if (hours[h] != 0)
                    out << id << "," << to_string(civil_from_days(day)) << "," << h << ","
                        << hours[h] << "\n";
        }
    }
}

}  // namespace newspop
