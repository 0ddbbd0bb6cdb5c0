// backtest.hpp
// Translates daily prediction scores into five-long/five-short equal-weighted
// zero-net-investment portfolios and aggregates strategy return series.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "statarb/dates.hpp"
#include "statarb/errors.hpp"
#include "statarb/features.hpp"

namespace statarb {

inline constexpr int kPortfolioSide = 5;  // stocks per book

struct DailyPortfolio {
    Date date;
    std::vector<std::string> longs;   // highest scores first
    std::vector<std::string> shorts;  // lowest scores first
    double long_return = 0.0;
    double short_return = 0.0;
    double combined_return = 0.0;

    // Filled by run_backtest for ledger emission, aligned with longs/shorts.
    std::vector<double> long_scores, short_scores;
    std::vector<double> long_rets, short_rets;
};

struct ReturnSeries {
    std::string spec;
    std::string side;  // long | short | combined | index
    std::vector<std::pair<Date, double>> points;  // strictly increasing dates

    std::vector<double> values() const;
};

// Top five scores long, bottom five short; ties resolved by ticker so the
// selection is deterministic.
DailyPortfolio build_portfolio(Date date, const std::map<std::string, double>& scores_on_day);

// Equal weights per unit of one-side gross exposure:
// combined = mean(long returns) - mean(short returns) = long + short legs.
void portfolio_return(DailyPortfolio& portfolio, const std::map<std::string, double>& realized);

// Running compounded return, value at t = prod(1 + r_k) - 1.
ReturnSeries cumulative(const ReturnSeries& series);

// The four reporting sub-periods: 2007-2009, 2010-2012, 2013-2015, 2016-2017.
std::vector<std::pair<std::string, ReturnSeries>> subperiods(const ReturnSeries& series);

// Equal-weighted mean of the surviving constituents' returns per panel day.
ReturnSeries index_benchmark(const Panel& panel, Date first, Date last);

struct BacktestLedger {
    std::string spec;
    std::vector<DailyPortfolio> days;
    ReturnSeries long_series, short_series, combined_series, index_series;
    std::size_t skipped_days = 0;  // days with fewer than 10 scored stocks
};

// Scores are (panel row id, probability) pairs covering test-range rows.
BacktestLedger run_backtest(const Panel& panel, const std::string& spec,
                            const std::vector<std::uint32_t>& rows,
                            const std::vector<double>& scores);

}  // namespace statarb
