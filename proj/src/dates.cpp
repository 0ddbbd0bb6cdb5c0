#include "statarb/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace statarb {

namespace {

// Howard Hinnant's civil-from-days / days-from-civil algorithms.
std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);          // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);          // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                               // [0, 11]
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool days_in_month_ok(int y, unsigned m, unsigned d) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    unsigned len = lengths[m - 1];
    if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) len = 29;
    return d <= len;
}

bool parse_uint(const std::string& s, size_t pos, size_t len, int& out) {
    int v = 0;
    if (pos + len > s.size()) return false;
    for (size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

const char* weekday_name(Weekday w) {
    static const char* names[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    return names[static_cast<int>(w)];
}

Date::Date(int year, unsigned month, unsigned day) {
    if (!days_in_month_ok(year, month, day))
        throw std::invalid_argument("invalid calendar date");
    days_ = days_from_civil(year, month, day);
}

bool Date::try_parse(const std::string& iso, Date& out) {
    int y, m, d;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return false;
    if (!parse_uint(iso, 0, 4, y) || !parse_uint(iso, 5, 2, m) || !parse_uint(iso, 8, 2, d))
        return false;
    if (!days_in_month_ok(y, static_cast<unsigned>(m), static_cast<unsigned>(d))) return false;
    out = Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
    return true;
}

Date Date::parse(const std::string& iso) {
    Date d;
    if (!try_parse(iso, d)) throw std::invalid_argument("invalid ISO date: " + iso);
    return d;
}

int Date::year() const {
    int y; unsigned m, d;
    civil_from_days(days_, y, m, d);
    return y;
}

unsigned Date::month() const {
    int y; unsigned m, d;
    civil_from_days(days_, y, m, d);
    return m;
}

unsigned Date::day() const {
    int y; unsigned m, d;
    civil_from_days(days_, y, m, d);
    return d;
}

Weekday Date::weekday() const {
    // 1970-01-01 was a Thursday.
    int w = (days_ % 7 + 7 + 3) % 7;
    return static_cast<Weekday>(w);
}

std::string Date::to_string() const {
    int y; unsigned m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
    return buf;
}

bool YearMonth::try_parse(const std::string& iso, YearMonth& out) {
    int y, m;
    if (iso.size() != 7 || iso[4] != '-') return false;
    if (!parse_uint(iso, 0, 4, y) || !parse_uint(iso, 5, 2, m)) return false;
    if (m < 1 || m > 12) return false;
    out = YearMonth(y, static_cast<unsigned>(m));
    return true;
}

YearMonth YearMonth::parse(const std::string& iso) {
    YearMonth ym;
    if (!try_parse(iso, ym)) throw std::invalid_argument("invalid year-month: " + iso);
    return ym;
}

std::string YearMonth::to_string() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02u", year(), month());
    return buf;
}

}  // namespace statarb
