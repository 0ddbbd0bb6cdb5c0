// ingest.hpp
// Constituent, return, price and volume ingestion plus the empirical index
// membership per trading day.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "statarb/dates.hpp"
#include "statarb/errors.hpp"

namespace statarb {

// Top-level SIC divisions used as the categorical industry predictor.
enum class SicDivision : std::uint8_t {
    Agriculture = 0,
    Mining,
    Construction,
    Manufacturing,
    Transportation,
    WholesaleTrade,
    RetailTrade,
    Finance,
    Services,
    PublicAdministration,
    Nonclassifiable,
};

constexpr int kNumSicDivisions = 11;

const char* sic_division_name(SicDivision d);
bool try_parse_sic_division(const std::string& s, SicDivision& out);

// One index-membership interval of a ticker, closed on both ends. An absent
// to_date means the ticker is still a member.
struct ConstituentRecord {
    std::string ticker;
    Date from_date;
    std::optional<Date> to_date;
    SicDivision sic_division = SicDivision::Nonclassifiable;

    bool member_on(Date day) const {
        return from_date <= day && (!to_date || day <= *to_date);
    }
};

struct TradingCalendar {
    std::vector<Date> days;  // strictly increasing

    // Position of `day`, or -1 when it is not a trading day.
    std::ptrdiff_t index_of(Date day) const;
};

struct DailyObservation {
    std::string ticker;
    Date date;
    double ret = 0.0;            // holding period return, fraction
    double dollar_volume = 0.0;  // shares traded x closing price
    double svi = 0.0;            // stitched search volume, [0, 100]
};

struct RawPriceRecord {
    std::string ticker;
    Date date;
    double close_price = 0.0;
    double dividend = 0.0;
    double shares_traded = 0.0;
};

// Per-ticker return/volume series aligned on the ticker's own trading dates.
struct TickerSeries {
    std::string ticker;
    std::vector<Date> dates;          // strictly increasing
    std::vector<double> returns;      // same length
    std::vector<double> dollar_volumes;  // same length; -1 marks unavailable
};

struct MarketData {
    TradingCalendar calendar;          // sorted union of return dates
    std::vector<TickerSeries> series;  // sorted by ticker
    bool has_volumes = false;

    const TickerSeries* find(const std::string& ticker) const;
};

std::vector<ConstituentRecord> load_constituents(const std::string& path);
void write_constituents(const std::string& path, std::vector<ConstituentRecord> records);

// Tickers that are members over the entire day (closed intervals).
std::vector<std::string> membership_on(const std::vector<ConstituentRecord>& records, Date day);

// Holding period return from two consecutive trading-day price records.
double hpr_from_prices(const RawPriceRecord& prev, const RawPriceRecord& cur);

double dollar_volume(const RawPriceRecord& rec);

std::vector<RawPriceRecord> load_prices(const std::string& path);

// Merges ingested returns (returns.csv) and/or price-derived returns and
// volumes (prices.csv). When both sources supply a return for the same
// (ticker, day) and they disagree by more than `tolerance`, loading fails.
MarketData load_market_data(const std::optional<std::string>& returns_path,
                            const std::optional<std::string>& prices_path,
                            double tolerance = 1e-8);

}  // namespace statarb
