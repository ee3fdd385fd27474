#include "newspop/mentions.hpp"

namespace newspop {

std::int64_t window_popularity(const MentionSeries& series, const PredictionWindow& window) {
    const int first_hour = window.t_p == 0 ? 0 : window.t_p;
    return series.hour_range_total(window.day, first_hour, 23);
}

std::pair<CivilDateTime, CivilDateTime> news_feature_interval(const CivilDate& day, int t_p) {
    if (t_p == 0) {
        const CivilDate prev = add_days(day, -1);
        return {CivilDateTime{prev, 0, 0, 0}, CivilDateTime{prev, 23, 59, 59}};
    }
    return {CivilDateTime{day, 0, 0, 0}, CivilDateTime{day, t_p - 1, 59, 59}};
}

}  // namespace newspop
