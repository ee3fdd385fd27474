#include "newspop/civil.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

namespace newspop {

std::int64_t days_from_civil(const CivilDate& d) {
    std::int64_t y = d.year;
    unsigned m = static_cast<unsigned>(d.month);
    unsigned dd = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(dd)};
}

int weekday_index(const CivilDate& d) {
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    std::int64_t z = days_from_civil(d) + 3;
    return static_cast<int>(((z % 7) + 7) % 7);
}

static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lens = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return lens[month - 1];
}

CivilDate add_months(const CivilDate& d, int n) {
    int total = d.year * 12 + (d.month - 1) + n;
    int y = total / 12;
    int m = total % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    CivilDate out{y, m + 1, d.day};
    int dim = days_in_month(out.year, out.month);
    if (out.day > dim) out.day = dim;
    return out;
}

std::string to_string(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string to_string(const CivilDateTime& t) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", t.date.year, t.date.month,
                  t.date.day, t.hour, t.minute, t.second);
    return buf;
}

namespace {

bool read_int(const std::string& s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::optional<CivilDate> parse_date(const std::string& s) {
    int y, m, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, m) || !read_int(s, 8, 2, d))
        return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
    return CivilDate{y, m, d};
}

std::optional<ParsedTimestamp> parse_timestamp(const std::string& s) {
    if (s.size() < 19) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int hh, mm, ss;
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!read_int(s, 11, 2, hh) || !read_int(s, 14, 2, mm) || !read_int(s, 17, 2, ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    if (ss == 60) ss = 59;  // fold leap seconds

    size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {  // drop fractional seconds
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }

    ParsedTimestamp out;
    out.utc = CivilDateTime{*date, hh, mm, ss};
    if (pos == s.size()) {
        out.had_timezone = false;
        return out;
    }
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
        if (pos + 1 != s.size()) return std::nullopt;
        return out;
    }
    if (c != '+' && c != '-') return std::nullopt;
    ++pos;
    int oh = 0, om = 0;
    if (!read_int(s, pos, 2, oh)) return std::nullopt;
    pos += 2;
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (pos < s.size()) {
        if (!read_int(s, pos, 2, om)) return std::nullopt;
        pos += 2;
    }
    if (pos != s.size() || oh > 18 || om > 59) return std::nullopt;
    std::int64_t offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    std::int64_t epoch = out.utc.epoch_seconds() - offset;
    std::int64_t days = epoch / 86400;
    std::int64_t rem = epoch % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    out.utc.date = civil_from_days(days);
    out.utc.hour = static_cast<int>(rem / 3600);
    out.utc.minute = static_cast<int>((rem % 3600) / 60);
    out.utc.second = static_cast<int>(rem % 60);
    return out;
}

}  // namespace newspop
