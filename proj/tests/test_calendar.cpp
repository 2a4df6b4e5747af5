#include <doctest.h>

#include <chrono>

#include "s4cast/calendar.hpp"

using namespace s4cast;

namespace {

// Independent day-of-year oracle: month lengths accumulated by hand rather
// than through the library's calendar arithmetic.
int doy_oracle(int year, int month, int day) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    int doy = day;
    for (int m = 1; m < month; ++m) {
        doy += lengths[m - 1] + (m == 2 && leap ? 1 : 0);
    }
    return doy;
}

UtcDate make_date(int y, unsigned m, unsigned d) {
    return UtcDate{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

}  // namespace

TEST_CASE("day_of_year on pinned dates") {
    CHECK(day_of_year(make_date(2012, 3, 1)) == 61);
    CHECK(day_of_year(make_date(2011, 1, 18)) == 18);
    CHECK(day_of_year(make_date(2012, 2, 29)) == 60);
    CHECK(day_of_year(make_date(2012, 12, 31)) == 366);
    CHECK(day_of_year(make_date(2011, 12, 31)) == 365);
}

TEST_CASE("day_of_year matches the hand oracle across years") {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    for (int year : {1999, 2000, 2011, 2012, 2100}) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        for (int month = 1; month <= 12; ++month) {
            const int n_days = lengths[month - 1] + (month == 2 && leap ? 1 : 0);
            for (int day = 1; day <= n_days; ++day) {
                CAPTURE(year);
                CAPTURE(month);
                CAPTURE(day);
                CHECK(day_of_year(make_date(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day))) ==
                      doy_oracle(year, month, day));
            }
        }
    }
}

TEST_CASE("parse_utc_date accepts ISO and rejects junk") {
    const auto d = parse_utc_date("2014-03-01");
    REQUIRE(d.has_value());
    CHECK(*d == make_date(2014, 3, 1));
    CHECK(!parse_utc_date("2014-13-01"));
    CHECK(!parse_utc_date("2014-02-30"));
    CHECK(!parse_utc_date("2013-02-29"));
    CHECK(!parse_utc_date("2014/03/01"));
    CHECK(!parse_utc_date("20140301"));
    CHECK(!parse_utc_date(""));
}

TEST_CASE("leap-day parsing follows the Gregorian rules") {
    CHECK(parse_utc_date("2000-02-29").has_value());   // divisible by 400
    CHECK(!parse_utc_date("1900-02-29").has_value());  // century, not by 400
    CHECK(parse_utc_date("2012-02-29").has_value());
}

TEST_CASE("parse_utc_time variants") {
    const auto full = parse_utc_time("2014-03-01T12:34:56Z");
    REQUIRE(full.has_value());
    CHECK(date_of(*full) == make_date(2014, 3, 1));
    CHECK(hour_of_day(*full) == 12);

    const auto spaced = parse_utc_time("2014-03-01 12:34:56");
    REQUIRE(spaced.has_value());
    CHECK(*spaced == *full);

    const auto no_seconds = parse_utc_time("2014-03-01T12:34");
    REQUIRE(no_seconds.has_value());
    CHECK(*no_seconds == *full - std::chrono::seconds(56));

    CHECK(!parse_utc_time("2014-03-01T25:00:00"));
    CHECK(!parse_utc_time("2014-03-01T12:60:00"));
    CHECK(!parse_utc_time("2014-03-01"));
}

TEST_CASE("format and parse round-trip") {
    const auto t = parse_utc_time("1999-12-31T23:59:59Z");
    REQUIRE(t.has_value());
    CHECK(format_utc_time(*t) == "1999-12-31T23:59:59Z");
    CHECK(parse_utc_time(format_utc_time(*t)) == *t);
    CHECK(format_utc_date(make_date(2014, 3, 1)) == "2014-03-01");
}

TEST_CASE("date_of and hour_of_day at day boundaries") {
    const auto last = parse_utc_time("2012-02-29T23:59:59Z");
    REQUIRE(last.has_value());
    CHECK(date_of(*last) == make_date(2012, 2, 29));
    CHECK(hour_of_day(*last) == 23);

    const auto first = *last + std::chrono::seconds(1);
    CHECK(date_of(first) == make_date(2012, 3, 1));
    CHECK(hour_of_day(first) == 0);
}

TEST_CASE("date_from_year_doy is the inverse of day_of_year") {
    const auto leap_end = date_from_year_doy(2012, 366);
    REQUIRE(leap_end.has_value());
    CHECK(*leap_end == make_date(2012, 12, 31));
    CHECK(!date_from_year_doy(2011, 366));
    CHECK(!date_from_year_doy(2012, 0));
    CHECK(!date_from_year_doy(2012, 367));
    for (int doy = 1; doy <= 365; doy += 13) {
        const auto d = date_from_year_doy(2011, doy);
        REQUIRE(d.has_value());
        CHECK(day_of_year(*d) == doy);
    }
}
