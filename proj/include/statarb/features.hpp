// features.hpp
// Predictor construction (cumulative returns, search-volume changes, generic
// information) and the median-outperformance response, with removal
// accounting.

#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "statarb/dates.hpp"
#include "statarb/errors.hpp"
#include "statarb/ingest.hpp"
#include "statarb/svi.hpp"

namespace statarb {

inline constexpr std::array<int, 13> kCrLags = {1, 2, 3, 4, 5, 10, 15, 20, 40, 60, 120, 180, 240};
inline constexpr int kNumCrLags = 13;
inline constexpr int kNumSviLags = 5;
inline constexpr int kNumPredictors = kNumCrLags + kNumSviLags + 3;  // + weekday, industry, dvol

inline constexpr int kVarWeekday = kNumCrLags + kNumSviLags;
inline constexpr int kVarIndustry = kVarWeekday + 1;
inline constexpr int kVarDvol = kVarIndustry + 1;

const char* predictor_name(int var);
bool predictor_is_categorical(int var);
int predictor_levels(int var);  // 0 for numeric predictors

struct FeatureRow {
    std::string ticker;
    Date date;
    std::array<double, kNumCrLags> cr{};
    std::array<double, kNumSviLags> dsvi{};
    Weekday weekday = Weekday::Mon;
    SicDivision industry = SicDivision::Nonclassifiable;
    double dvol = 0.0;
    int label = 0;
};

struct RemovalCounts {
    std::size_t missing_return = 0;        // member day without an available return
    std::size_t insufficient_history = 0;  // fewer than 240 prior returns
    std::size_t missing_volume = 0;        // prior dollar volume absent or zero
    std::size_t degenerate_days = 0;       // days left with fewer than 2 rows
    std::size_t degenerate_day_rows = 0;

    std::size_t total_rows() const {
        return missing_return + insufficient_history + missing_volume + degenerate_day_rows;
    }
};

// Column-major feature panel, rows sorted by (date, ticker). Categorical
// predictors are stored as level codes.
struct Panel {
    std::vector<std::string> tickers;  // ticker code -> symbol
    std::vector<std::uint32_t> row_ticker;
    std::vector<Date> row_date;
    std::array<std::vector<double>, kNumPredictors> columns;
    std::vector<std::uint8_t> labels;
    std::vector<double> realized_returns;  // same-day R, used for labels and trading

    std::vector<Date> days;  // distinct dates, ascending
    std::vector<std::pair<std::uint32_t, std::uint32_t>> day_spans;  // row ranges per day

    RemovalCounts removals;

    std::size_t n_rows() const { return row_date.size(); }
    FeatureRow row(std::size_t i) const;

    // Row range [begin, end) covering dates in [first, last].
    std::pair<std::uint32_t, std::uint32_t> row_range(Date first, Date last) const;
    // Day-index range [begin, end) covering dates in [first, last].
    std::pair<std::uint32_t, std::uint32_t> day_range(Date first, Date last) const;
};

// Cumulative return over the last `lag` entries of a trailing return window
// ordered oldest to newest (ending at t-1).
double cumulative_return(std::span<const double> trailing_returns, int lag);

// Percentage change with the 0-handling of sparse search-volume data:
// 0 -> 0 stays 0, 0 -> positive maps to the sentinel 99.
double delta_svi(double svi_prev, double svi_cur);

double delta_volume(double v_t1, double v_t2);

// 1 for every ticker whose return strictly exceeds the day's median.
std::map<std::string, int> label_day(const std::map<std::string, double>& returns_on_t);

Panel build_panel(const MarketData& observations, const std::vector<StitchedSvi>& stitched_svi,
                  const std::vector<ConstituentRecord>& constituents, Date window_first,
                  Date window_last);

void write_panel_csv(const std::string& path, const Panel& panel);

}  // namespace statarb
