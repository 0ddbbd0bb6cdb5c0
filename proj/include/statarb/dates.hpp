// dates.hpp
// Civil calendar dates as day counts since 1970-01-01, with ISO-8601 parsing.

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace statarb {

enum class Weekday { Mon = 0, Tue, Wed, Thu, Fri, Sat, Sun };

const char* weekday_name(Weekday w);

// A calendar date stored as days since the epoch. Cheap to copy and order;
// arithmetic in whole days.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
    Date(int year, unsigned month, unsigned day);

    static Date parse(const std::string& iso);           // "YYYY-MM-DD"
    static bool try_parse(const std::string& iso, Date& out);

    std::int32_t days() const { return days_; }
    int year() const;
    unsigned month() const;
    unsigned day() const;
    Weekday weekday() const;

    std::string to_string() const;

    Date operator+(int n) const { return Date(days_ + n); }
    Date operator-(int n) const { return Date(days_ - n); }
    int operator-(Date other) const { return days_ - other.days_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

// Year-month key for monthly SVI series, totally ordered.
class YearMonth {
public:
    YearMonth() = default;
    YearMonth(int year, unsigned month) : code_(year * 12 + static_cast<int>(month) - 1) {}
    explicit YearMonth(Date d) : YearMonth(d.year(), d.month()) {}

    static YearMonth parse(const std::string& iso);       // "YYYY-MM"
    static bool try_parse(const std::string& iso, YearMonth& out);

    int year() const { return code_ >= 0 ? code_ / 12 : (code_ - 11) / 12; }
    unsigned month() const { return static_cast<unsigned>(code_ - (year() * 12)) + 1; }
    YearMonth next() const { YearMonth m; m.code_ = code_ + 1; return m; }

    std::string to_string() const;

    auto operator<=>(const YearMonth&) const = default;

private:
    int code_ = 0;  // year*12 + (month-1)
};

}  // namespace statarb
