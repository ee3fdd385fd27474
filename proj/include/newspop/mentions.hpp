#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>

#include "newspop/civil.hpp"

namespace newspop {

inline constexpr std::array<int, 6> kPredictionHours = {0, 4, 8, 12, 16, 20};

inline bool is_valid_tp(int tp) {
    for (int h : kPredictionHours)
        if (h == tp) return true;
    return false;
}

// Hourly mention counts for one entity on the social stream. Absent
// (day, hour) keys mean zero.
class MentionSeries {
public:
    MentionSeries() = default;
    explicit MentionSeries(std::string entity_id) : entity_id_(std::move(entity_id)) {}

    const std::string& entity_id() const { return entity_id_; }

    void add(const CivilDate& day, int hour, std::int64_t n) {
        if (n == 0) return;
        counts_[days_from_civil(day)][hour] += n;
    }

    std::int64_t at(const CivilDate& day, int hour) const {
        auto it = counts_.find(days_from_civil(day));
        return it == counts_.end() ? 0 : it->second[hour];
    }

    // Sum of hours [h0, h1] on one day.
    std::int64_t hour_range_total(const CivilDate& day, int h0, int h1) const {
        auto it = counts_.find(days_from_civil(day));
        if (it == counts_.end()) return 0;
        std::int64_t s = 0;
        for (int h = h0; h <= h1; ++h) s += it->second[h];
        return s;
    }

    std::int64_t day_total(const CivilDate& day) const { return hour_range_total(day, 0, 23); }

    const std::unordered_map<std::int64_t, std::array<std::int64_t, 24>>& raw() const {
        return counts_;
    }

private:
    std::string entity_id_;
    std::unordered_map<std::int64_t, std::array<std::int64_t, 24>> counts_;
};

// Daily window [t_p, 23:59:59] on `day`; t_p = 0 means the full day.
struct PredictionWindow {
    CivilDate day;
    int t_p = 0;
};

// f_p: mentions integrated over the window.
std::int64_t window_popularity(const MentionSeries& series, const PredictionWindow& window);

// Interval of the news stream feeding the features for (day, t_p): the same
// day up to t_p for t_p > 0, the whole previous day for t_p = 0.
std::pair<CivilDateTime, CivilDateTime> news_feature_interval(const CivilDate& day, int t_p);

}  // namespace newspop
