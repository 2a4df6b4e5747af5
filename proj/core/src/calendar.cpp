#include "s4cast/calendar.hpp"

#include <charconv>
#include <cstdio>

namespace s4cast {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::optional<UtcDate> parse_utc_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    UtcDate ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

std::optional<UtcTime> parse_utc_time(std::string_view text) {
    // Trailing 'Z' is optional; all times are UTC.
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
        text.remove_suffix(1);
    }
    if (text.size() < 16) return std::nullopt;
    if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
    auto date = parse_utc_date(text.substr(0, 10));
    if (!date) return std::nullopt;

    std::string_view clock = text.substr(11);
    if (clock.size() != 5 && clock.size() != 8) return std::nullopt;
    if (clock[2] != ':') return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (!parse_int(clock.substr(0, 2), hh) || !parse_int(clock.substr(3, 2), mm)) {
        return std::nullopt;
    }
    if (clock.size() == 8) {
        if (clock[5] != ':') return std::nullopt;
        if (!parse_int(clock.substr(6, 2), ss)) return std::nullopt;
    }
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60) return std::nullopt;
    if (ss == 60) ss = 59;  // fold leap seconds

    return std::chrono::sys_days{*date} + std::chrono::hours{hh} +
           std::chrono::minutes{mm} + std::chrono::seconds{ss};
}

std::optional<UtcDate> date_from_year_doy(int year, int doy) {
    using namespace std::chrono;
    if (doy < 1 || doy > 366) return std::nullopt;
    sys_days jan1{UtcDate{std::chrono::year{year}, January, day{1}}};
    UtcDate d{jan1 + days{doy - 1}};
    if (static_cast<int>(d.year()) != year) return std::nullopt;  // doy 366 in a common year
    return d;
}

UtcDate date_of(UtcTime t) {
    return UtcDate{std::chrono::floor<std::chrono::days>(t)};
}

int day_of_year(UtcDate d) {
    using namespace std::chrono;
    sys_days jan1{UtcDate{d.year(), January, day{1}}};
    return static_cast<int>((sys_days{d} - jan1).count()) + 1;
}

int hour_of_day(UtcTime t) {
    using namespace std::chrono;
    auto tod = t - floor<days>(t);
    return static_cast<int>(duration_cast<hours>(tod).count());
}

std::string format_utc_time(UtcTime t) {
    using namespace std::chrono;
    auto d = date_of(t);
    auto tod = t - floor<days>(t);
    int hh = static_cast<int>(duration_cast<hours>(tod).count());
    int mm = static_cast<int>(duration_cast<minutes>(tod).count() % 60);
    int ss = static_cast<int>(duration_cast<seconds>(tod).count() % 60);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()), hh, mm, ss);
    return buf;
}

std::string format_utc_date(UtcDate d) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

}  // namespace s4cast
