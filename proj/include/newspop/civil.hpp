#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace newspop {

// Proleptic Gregorian calendar date, always UTC.
struct CivilDate {
    int year = 1970;
    int month = 1;  // 1-12
    int day = 1;    // 1-31

    friend bool operator==(const CivilDate&, const CivilDate&) = default;
    friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

// Days since 1970-01-01 (negative before).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

inline CivilDate add_days(const CivilDate& d, std::int64_t n) {
    return civil_from_days(days_from_civil(d) + n);
}

// 0 = Monday ... 6 = Sunday.
int weekday_index(const CivilDate& d);

inline bool is_weekend(const CivilDate& d) { return weekday_index(d) >= 5; }

int days_in_month(int year, int month);

// (year, month) shifted by n calendar months, day clamped to the target month.
CivilDate add_months(const CivilDate& d, int n);

std::string to_string(const CivilDate& d);  // YYYY-MM-DD
std::optional<CivilDate> parse_date(const std::string& s);

// Second-precision UTC timestamp.
struct CivilDateTime {
    CivilDate date;
    int hour = 0;
    int minute = 0;
    int second = 0;

    std::int64_t epoch_seconds() const {
        return days_from_civil(date) * 86400 + hour * 3600 + minute * 60 + second;
    }

    friend bool operator==(const CivilDateTime&, const CivilDateTime&) = default;
};

inline bool operator<(const CivilDateTime& a, const CivilDateTime& b) {
    return a.epoch_seconds() < b.epoch_seconds();
}

std::string to_string(const CivilDateTime& t);  // YYYY-MM-DDTHH:MM:SSZ

struct ParsedTimestamp {
    CivilDateTime utc;
    bool had_timezone = true;
};

// Accepts ISO-8601 with 'T' or ' ' separator; offsets (Z, +HH:MM, -HHMM)
// are normalized to UTC. Fractional seconds are truncated. A missing
// offset parses as UTC with had_timezone = false.
std::optional<ParsedTimestamp> parse_timestamp(const std::string& s);

}  // namespace newspop
