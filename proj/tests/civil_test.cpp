#include <doctest.h>

#include "newspop/civil.hpp"
#include "newspop/rng.hpp"

using namespace newspop;

TEST_CASE("civil date round-trips through day numbers") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t days = static_cast<std::int64_t>(rng.uniform_int(-200000, 200000));
        const CivilDate d = civil_from_days(days);
        CHECK(days_from_civil(d) == days);
        CHECK(d.month >= 1);
        CHECK(d.month <= 12);
        CHECK(d.day >= 1);
        CHECK(d.day <= days_in_month(d.year, d.month));
    }
}

TEST_CASE("known anchor dates") {
    CHECK(days_from_civil({1970, 1, 1}) == 0);
    CHECK(days_from_civil({1970, 1, 2}) == 1);
    CHECK(to_string(civil_from_days(16504)) == "2015-03-10");
    CHECK(weekday_index({2015, 3, 10}) == 1);  // Tuesday
    CHECK(weekday_index({2015, 3, 14}) == 5);  // Saturday
    CHECK(is_weekend({2015, 3, 14}));
    CHECK(is_weekend({2015, 3, 15}));
    CHECK(!is_weekend({2015, 3, 16}));
}

TEST_CASE("calendar rollover and leap years") {
    CHECK(add_days({2015, 3, 1}, -1) == CivilDate{2015, 2, 28});
    CHECK(add_days({2016, 3, 1}, -1) == CivilDate{2016, 2, 29});
    CHECK(days_in_month(2016, 2) == 29);
    CHECK(days_in_month(2100, 2) == 28);
    CHECK(days_in_month(2000, 2) == 29);
}

TEST_CASE("add_months clamps the day") {
    CHECK(add_months({2015, 1, 31}, 1) == CivilDate{2015, 2, 28});
    CHECK(add_months({2015, 1, 1}, -24) == CivilDate{2013, 1, 1});
    CHECK(add_months({2015, 12, 1}, -24) == CivilDate{2013, 12, 1});
    CHECK(add_months({2013, 11, 15}, 3) == CivilDate{2014, 2, 15});
}

TEST_CASE("timestamp parsing normalizes to UTC") {
    auto t = parse_timestamp("2015-03-10T08:30:05Z");
    REQUIRE(t.has_value());
    CHECK(t->had_timezone);
    CHECK(t->utc == CivilDateTime{{2015, 3, 10}, 8, 30, 5});

    t = parse_timestamp("2015-03-10 08:30:05+01:00");
    REQUIRE(t.has_value());
    CHECK(t->utc == CivilDateTime{{2015, 3, 10}, 7, 30, 5});

    t = parse_timestamp("2015-01-01T00:10:00+0230");
    REQUIRE(t.has_value());
    CHECK(t->utc == CivilDateTime{{2014, 12, 31}, 21, 40, 0});

    t = parse_timestamp("2015-03-10T23:59:59.750-02:00");
    REQUIRE(t.has_value());
    CHECK(t->utc == CivilDateTime{{2015, 3, 11}, 1, 59, 59});

    t = parse_timestamp("2015-03-10T08:30:05");
    REQUIRE(t.has_value());
    CHECK(!t->had_timezone);
    CHECK(t->utc == CivilDateTime{{2015, 3, 10}, 8, 30, 5});

    CHECK(!parse_timestamp("2015-03-10").has_value());
    CHECK(!parse_timestamp("2015-13-10T00:00:00Z").has_value());
    CHECK(!parse_timestamp("2015-02-29T00:00:00Z").has_value());
    CHECK(!parse_timestamp("garbage").has_value());
}

TEST_CASE("date parsing rejects malformed input") {
    CHECK(parse_date("2015-03-10").has_value());
    CHECK(!parse_date("2015-3-10").has_value());
    CHECK(!parse_date("2015-00-10").has_value());
    CHECK(!parse_date("2015-01-32").has_value());
}
