#include "statarb/backtest.hpp"

#include <algorithm>

namespace statarb {

std::vector<double> ReturnSeries::values() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& [date, r] : points) v.push_back(r);
    return v;
}

DailyPortfolio build_portfolio(Date date, const std::map<std::string, double>& scores_on_day) {
    if (scores_on_day.size() < 2 * kPortfolioSide)
        raise(ErrorCode::TooFewScores, "need at least " + std::to_string(2 * kPortfolioSide) +
                                           " scored stocks on " + date.to_string() + ", have " +
                                           std::to_string(scores_on_day.size()));

    std::vector<std::pair<std::string, double>> ranked(scores_on_day.begin(), scores_on_day.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    DailyPortfolio p;
    p.date = date;
    for (int i = 0; i < kPortfolioSide; ++i) p.longs.push_back(ranked[i].first);
    // The short book reads from the bottom of the same ranking, so the two
    // books can never overlap.
    for (int i = 0; i < kPortfolioSide; ++i)
        p.shorts.push_back(ranked[ranked.size() - 1 - i].first);
    return p;
}

void portfolio_return(DailyPortfolio& portfolio, const std::map<std::string, double>& realized) {
    auto mean_return = [&](const std::vector<std::string>& book) {
        double sum = 0.0;
        for (const auto& ticker : book) {
            auto it = realized.find(ticker);
            if (it == realized.end())
                raise(ErrorCode::MissingRealizedReturn,
                      "no realized return for " + ticker + " on " + portfolio.date.to_string());
            sum += it->second;
        }
        return sum / static_cast<double>(book.size());
    };
    portfolio.long_return = mean_return(portfolio.longs);
    portfolio.short_return = -mean_return(portfolio.shorts);
    portfolio.combined_return = portfolio.long_return + portfolio.short_return;
}

ReturnSeries cumulative(const ReturnSeries& series) {
    ReturnSeries out;
    out.spec = series.spec;
    out.side = series.side;
    out.points.reserve(series.points.size());
    double growth = 1.0;
    for (const auto& [date, r] : series.points) {
        growth *= 1.0 + r;
        out.points.emplace_back(date, growth - 1.0);
    }
    return out;
}

std::vector<std::pair<std::string, ReturnSeries>> subperiods(const ReturnSeries& series) {
    struct Bucket {
        const char* name;
        int first_year;
        int last_year;
    };
    static const Bucket buckets[] = {
        {"2007-2009", 2007, 2009},
        {"2010-2012", 2010, 2012},
        {"2013-2015", 2013, 2015},
        {"2016-2017", 2016, 2017},
    };
    std::vector<std::pair<std::string, ReturnSeries>> out;
    for (const auto& b : buckets) {
        ReturnSeries slice;
        slice.spec = series.spec;
        slice.side = series.side;
        out.emplace_back(b.name, std::move(slice));
    }
    for (const auto& [date, r] : series.points) {
        int year = date.year();
        bool placed = false;
        for (size_t k = 0; k < 4; ++k) {
            if (year >= buckets[k].first_year && year <= buckets[k].last_year) {
                out[k].second.points.emplace_back(date, r);
                placed = true;
                break;
            }
        }
        if (!placed)
            raise(ErrorCode::InvalidConfig,
                  "date " + date.to_string() + " outside the 2007-2017 sub-period layout");
    }
    return out;
}

ReturnSeries index_benchmark(const Panel& panel, Date first, Date last) {
    ReturnSeries out;
    out.spec = "INDEX";
    out.side = "index";
    auto [day_begin, day_end] = panel.day_range(first, last);
    for (std::uint32_t d = day_begin; d < day_end; ++d) {
        auto [row_begin, row_end] = panel.day_spans[d];
        double sum = 0.0;
        for (std::uint32_t i = row_begin; i < row_end; ++i) sum += panel.realized_returns[i];
        out.points.emplace_back(panel.days[d], sum / static_cast<double>(row_end - row_begin));
    }
    return out;
}

BacktestLedger run_backtest(const Panel& panel, const std::string& spec,
                            const std::vector<std::uint32_t>& rows,
                            const std::vector<double>& scores) {
    if (rows.size() != scores.size())
        raise(ErrorCode::InternalError, "scores and rows disagree in length");

    BacktestLedger ledger;
    ledger.spec = spec;
    ledger.long_series.spec = ledger.short_series.spec = ledger.combined_series.spec = spec;
    ledger.long_series.side = "long";
    ledger.short_series.side = "short";
    ledger.combined_series.side = "combined";
    ledger.index_series.spec = spec;
    ledger.index_series.side = "index";

    // Group scored rows by day; rows arrive in panel (date, ticker) order.
    size_t i = 0;
    while (i < rows.size()) {
        size_t j = i;
        Date day = panel.row_date[rows[i]];
        std::map<std::string, double> day_scores;
        std::map<std::string, double> day_returns;
        while (j < rows.size() && panel.row_date[rows[j]] == day) {
            const std::string& ticker = panel.tickers[panel.row_ticker[rows[j]]];
            day_scores[ticker] = scores[j];
            day_returns[ticker] = panel.realized_returns[rows[j]];
            ++j;
        }
        i = j;
        if (day_scores.size() < 2 * kPortfolioSide) {
            ++ledger.skipped_days;
            continue;
        }
        DailyPortfolio portfolio = build_portfolio(day, day_scores);
        portfolio_return(portfolio, day_returns);
        for (const auto& t : portfolio.longs) {
            portfolio.long_scores.push_back(day_scores.at(t));
            portfolio.long_rets.push_back(day_returns.at(t));
        }
        for (const auto& t : portfolio.shorts) {
            portfolio.short_scores.push_back(day_scores.at(t));
            portfolio.short_rets.push_back(day_returns.at(t));
        }

        double index_mean = 0.0;
        for (const auto& [ticker, r] : day_returns) index_mean += r;
        index_mean /= static_cast<double>(day_returns.size());

        ledger.long_series.points.emplace_back(day, portfolio.long_return);
        ledger.short_series.points.emplace_back(day, portfolio.short_return);
        ledger.combined_series.points.emplace_back(day, portfolio.combined_return);
        ledger.index_series.points.emplace_back(day, index_mean);
        ledger.days.push_back(std::move(portfolio));
    }
    return ledger;
}

}  // namespace statarb
