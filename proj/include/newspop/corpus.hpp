#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "newspop/civil.hpp"
#include "newspop/mentions.hpp"

namespace newspop {

// Unrecoverable input problem (bad file, bad registry, broken structure).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewsDoc {
    std::string id;
    CivilDateTime timestamp;
    std::string source;
    std::string title;
    std::string body;
    std::vector<std::string> tags;
    std::vector<std::string> entity_ids;        // sorted, unique
    std::vector<std::string> title_entity_ids;  // subset of entity_ids

    friend bool operator==(const NewsDoc&, const NewsDoc&) = default;
};

struct SocialPost {
    std::string id;
    CivilDateTime timestamp;
    std::string text;
};

struct RegistryEntry {
    std::string id;
    std::string canonical;
    std::vector<std::string> surface_forms;
};

class EntityRegistry {
public:
    EntityRegistry() = default;
    explicit EntityRegistry(std::vector<RegistryEntry> entries);

    const std::vector<RegistryEntry>& entries() const { return entries_; }
    bool has(const std::string& id) const { return by_id_.count(id) > 0; }
    std::size_t size() const { return entries_.size(); }

    // Entity ids whose surface forms occur in `text` as whole-word token
    // sequences, case-insensitively. Sorted, unique.
    std::vector<std::string> match(const std::string& text) const;

private:
    std::vector<RegistryEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
    // first token of a lowercased surface form -> (token sequence, entry index)
    std::unordered_map<std::string, std::vector<std::pair<std::vector<std::string>, std::size_t>>>
        matcher_;
};

struct RejectLine {
    std::size_t line_number = 0;
    std::string reason;
    bool warning = false;  // warnings keep the record
};

struct RejectsReport {
    std::vector<RejectLine> lines;

    std::size_t hard_count() const;
    void add(std::size_t line, std::string reason) { lines.push_back({line, std::move(reason), false}); }
    void warn(std::size_t line, std::string reason) { lines.push_back({line, std::move(reason), true}); }
    void write_csv(const std::string& path) const;
};

// Immutable index over accepted news records, safe to share across threads.
class CorpusIndex {
public:
    CorpusIndex() = default;
    explicit CorpusIndex(std::vector<NewsDoc> docs);

    const std::vector<NewsDoc>& docs() const { return docs_; }

    // Docs mentioning `entity` with timestamp inside [start, end], in
    // (timestamp, id) order.
    std::vector<const NewsDoc*> entity_news_between(const std::string& entity,
                                                    const CivilDateTime& start,
                                                    const CivilDateTime& end) const;

    std::int64_t entity_hour_count(const std::string& entity, const CivilDate& day,
                                   int hour) const;
    std::int64_t entity_day_count(const std::string& entity, const CivilDate& day) const;
    std::int64_t entity_title_day_count(const std::string& entity, const CivilDate& day) const;

    std::optional<std::pair<CivilDate, CivilDate>> coverage() const { return coverage_; }

private:
    std::vector<NewsDoc> docs_;  // sorted by (timestamp, id)
    std::unordered_map<std::string, std::vector<std::size_t>> by_entity_;
    std::optional<std::pair<CivilDate, CivilDate>> coverage_;
};

EntityRegistry load_registry(const std::string& path);

struct NewsLoadResult {
    CorpusIndex index;
    RejectsReport rejects;
};

// News JSONL. Records without entity annotations get them filled by surface
// form matching (title and body scanned separately).
NewsLoadResult load_news(const std::string& path, const EntityRegistry& registry);

struct SocialLoadResult {
    std::map<std::string, MentionSeries> series;  // keyed by entity id, all registry entities
    RejectsReport rejects;
};

// Social JSONL ({"id","timestamp","text"}) or pre-aggregated CSV with header
// entity_id,date,hour,count. Format is sniffed from the first line.
SocialLoadResult load_social(const std::string& path, const EntityRegistry& registry);

// Canonical re-serialization (round-trips accepted records field-for-field).
void write_news_jsonl(const CorpusIndex& index, const std::string& path);
void write_social_csv(const std::map<std::string, MentionSeries>& series,
                      const std::string& path);

}  // namespace newspop
