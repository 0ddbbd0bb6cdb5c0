#include "statarb/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "statarb/csv.hpp"

namespace statarb {

namespace {

const char* kSicNames[kNumSicDivisions] = {
    "Agriculture",
    "Mining",
    "Construction",
    "Manufacturing",
    "Transportation",
    "WholesaleTrade",
    "RetailTrade",
    "Finance",
    "Services",
    "PublicAdministration",
    "Nonclassifiable",
};

bool valid_ticker(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

const char* sic_division_name(SicDivision d) { return kSicNames[static_cast<int>(d)]; }

bool try_parse_sic_division(const std::string& s, SicDivision& out) {
    for (int i = 0; i < kNumSicDivisions; ++i) {
        if (s == kSicNames[i]) {
            out = static_cast<SicDivision>(i);
            return true;
        }
    }
    return false;
}

std::ptrdiff_t TradingCalendar::index_of(Date day) const {
    auto it = std::lower_bound(days.begin(), days.end(), day);
    if (it == days.end() || *it != day) return -1;
    return it - days.begin();
}

const TickerSeries* MarketData::find(const std::string& ticker) const {
    auto it = std::lower_bound(series.begin(), series.end(), ticker,
                               [](const TickerSeries& s, const std::string& t) { return s.ticker < t; });
    if (it == series.end() || it->ticker != ticker) return nullptr;
    return &*it;
}

std::vector<ConstituentRecord> load_constituents(const std::string& path) {
    CsvReader in(path, {"ticker", "from_date", "to_date", "sic_division"});
    std::vector<ConstituentRecord> records;
    while (in.next()) {
        ConstituentRecord rec;
        rec.ticker = in.field(0);
        if (!valid_ticker(rec.ticker)) in.fail("invalid ticker \"" + rec.ticker + "\"");
        if (!Date::try_parse(in.field(1), rec.from_date))
            in.fail("invalid from_date \"" + in.field(1) + "\"");
        if (!in.field(2).empty()) {
            Date to;
            if (!Date::try_parse(in.field(2), to)) in.fail("invalid to_date \"" + in.field(2) + "\"");
            if (to < rec.from_date) in.fail("to_date precedes from_date");
            rec.to_date = to;
        }
        if (!try_parse_sic_division(in.field(3), rec.sic_division))
            raise(ErrorCode::UnknownSicDivision,
                  path + ":" + std::to_string(in.line_number()) + ": unknown SIC division \"" +
                      in.field(3) + "\"");
        records.push_back(std::move(rec));
    }

    // Intervals of the same ticker must not overlap.
    std::vector<const ConstituentRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const ConstituentRecord* a, const ConstituentRecord* b) {
        return a->ticker != b->ticker ? a->ticker < b->ticker : a->from_date < b->from_date;
    });
    for (size_t i = 1; i < sorted.size(); ++i) {
        const auto* prev = sorted[i - 1];
        const auto* cur = sorted[i];
        if (prev->ticker != cur->ticker) continue;
        if (!prev->to_date || cur->from_date <= *prev->to_date)
            raise(ErrorCode::OverlappingMembership,
                  path + ": overlapping membership intervals for " + cur->ticker);
    }
    return records;
}

void write_constituents(const std::string& path, std::vector<ConstituentRecord> records) {
    std::sort(records.begin(), records.end(), [](const ConstituentRecord& a, const ConstituentRecord& b) {
        return a.ticker != b.ticker ? a.ticker < b.ticker : a.from_date < b.from_date;
    });
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out << "ticker,from_date,to_date,sic_division\n";
    for (const auto& r : records) {
        out << r.ticker << ',' << r.from_date.to_string() << ','
            << (r.to_date ? r.to_date->to_string() : "") << ',' << sic_division_name(r.sic_division)
            << '\n';
    }
}

std::vector<std::string> membership_on(const std::vector<ConstituentRecord>& records, Date day) {
    std::vector<std::string> members;
    for (const auto& r : records)
        if (r.member_on(day)) members.push_back(r.ticker);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return members;
}

double hpr_from_prices(const RawPriceRecord& prev, const RawPriceRecord& cur) {
    if (prev.ticker != cur.ticker)
        raise(ErrorCode::TickerMismatch, "hpr ticker mismatch: " + prev.ticker + " vs " + cur.ticker);
    if (prev.close_price <= 0.0 || cur.close_price <= 0.0)
        raise(ErrorCode::NonPositivePrice, "non-positive close price for " + cur.ticker);
    return ((cur.close_price - prev.close_price) + cur.dividend) / prev.close_price;
}

double dollar_volume(const RawPriceRecord& rec) { return rec.shares_traded * rec.close_price; }

std::vector<RawPriceRecord> load_prices(const std::string& path) {
    CsvReader in(path, {"date", "ticker", "close", "dividend", "shares_traded"});
    std::vector<RawPriceRecord> records;
    while (in.next()) {
        RawPriceRecord rec;
        if (!Date::try_parse(in.field(0), rec.date)) in.fail("invalid date \"" + in.field(0) + "\"");
        rec.ticker = in.field(1);
        if (!valid_ticker(rec.ticker)) in.fail("invalid ticker \"" + rec.ticker + "\"");
        rec.close_price = in.parse_double(2);
        rec.dividend = in.parse_double(3);
        rec.shares_traded = in.parse_double(4);
        if (rec.close_price <= 0.0)
            raise(ErrorCode::NonPositivePrice,
                  path + ":" + std::to_string(in.line_number()) + ": close must be positive");
        if (rec.dividend < 0.0) in.fail("negative dividend");
        if (rec.shares_traded < 0.0) in.fail("negative shares_traded");
        records.push_back(std::move(rec));
    }
    return records;
}

MarketData load_market_data(const std::optional<std::string>& returns_path,
                            const std::optional<std::string>& prices_path,
                            double tolerance) {
    if (!returns_path && !prices_path)
        raise(ErrorCode::ConfigError, "need returns or prices input");

    // ticker -> date -> (ret, dvol flags)
    struct Cell {
        double ret = 0.0;
        bool has_ret = false;
        double derived_ret = 0.0;
        bool has_derived = false;
        double dvol = -1.0;
    };
    std::map<std::string, std::map<Date, Cell>> table;

    if (returns_path) {
        CsvReader in(*returns_path, {"date", "ticker", "ret"});
        while (in.next()) {
            Date d;
            if (!Date::try_parse(in.field(0), d)) in.fail("invalid date \"" + in.field(0) + "\"");
            const std::string& t = in.field(1);
            if (!valid_ticker(t)) in.fail("invalid ticker \"" + t + "\"");
            double r = in.parse_double(2);
            if (r <= -1.0) in.fail("return must exceed -1");
            Cell& c = table[t][d];
            if (c.has_ret) in.fail("duplicate return for " + t + " on " + d.to_string());
            c.ret = r;
            c.has_ret = true;
        }
    }

    if (prices_path) {
        auto prices = load_prices(*prices_path);
        std::stable_sort(prices.begin(), prices.end(),
                         [](const RawPriceRecord& a, const RawPriceRecord& b) {
                             return a.ticker != b.ticker ? a.ticker < b.ticker : a.date < b.date;
                         });
        for (size_t i = 0; i < prices.size(); ++i) {
            const auto& rec = prices[i];
            if (i > 0 && prices[i - 1].ticker == rec.ticker && prices[i - 1].date == rec.date)
                raise(ErrorCode::MalformedRow, *prices_path + ": duplicate price for " + rec.ticker +
                                                   " on " + rec.date.to_string());
            Cell& c = table[rec.ticker][rec.date];
            c.dvol = dollar_volume(rec);
            if (i > 0 && prices[i - 1].ticker == rec.ticker) {
                c.derived_ret = hpr_from_prices(prices[i - 1], rec);
                c.has_derived = true;
            }
        }
    }

    // Reconcile sources; a silent preference would hide data errors.
    for (auto& [ticker, by_date] : table) {
        for (auto& [date, cell] : by_date) {
            if (cell.has_ret && cell.has_derived &&
                std::fabs(cell.ret - cell.derived_ret) > tolerance)
                raise(ErrorCode::ReturnMismatch,
                      "ingested and price-derived returns disagree for " + ticker + " on " +
                          date.to_string() + ": " + std::to_string(cell.ret) + " vs " +
                          std::to_string(cell.derived_ret));
            if (!cell.has_ret && cell.has_derived) {
                if (cell.derived_ret <= -1.0)
                    raise(ErrorCode::MalformedRow, "derived return for " + ticker + " on " +
                                                       date.to_string() + " is not above -1");
                cell.ret = cell.derived_ret;
                cell.has_ret = true;
            }
        }
    }

    MarketData md;
    md.has_volumes = prices_path.has_value();
    std::set<Date> all_days;
    for (auto& [ticker, by_date] : table) {
        TickerSeries s;
        s.ticker = ticker;
        for (auto& [date, cell] : by_date) {
            if (!cell.has_ret) continue;  // first price day has no return
            s.dates.push_back(date);
            s.returns.push_back(cell.ret);
            s.dollar_volumes.push_back(cell.dvol);
            all_days.insert(date);
        }
        if (!s.dates.empty()) md.series.push_back(std::move(s));
    }
    md.calendar.days.assign(all_days.begin(), all_days.end());
    return md;
}

}  // namespace statarb
