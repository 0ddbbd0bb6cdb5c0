#include "statarb/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "statarb/csv.hpp"

namespace statarb {

namespace {

std::array<std::string, kNumPredictors> make_names() {
    std::array<std::string, kNumPredictors> names;
    for (int i = 0; i < kNumCrLags; ++i) names[i] = "cr_" + std::to_string(kCrLags[i]);
    for (int i = 0; i < kNumSviLags; ++i)
        names[kNumCrLags + i] = "dsvi_" + std::to_string(i + 1);
    names[kVarWeekday] = "weekday";
    names[kVarIndustry] = "industry";
    names[kVarDvol] = "dvol";
    return names;
}

const std::array<std::string, kNumPredictors>& names() {
    static const auto instance = make_names();
    return instance;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

const char* predictor_name(int var) { return names()[var].c_str(); }

bool predictor_is_categorical(int var) { return var == kVarWeekday || var == kVarIndustry; }

int predictor_levels(int var) {
    if (var == kVarWeekday) return 5;
    if (var == kVarIndustry) return kNumSicDivisions;
    return 0;
}

FeatureRow Panel::row(std::size_t i) const {
    FeatureRow r;
    r.ticker = tickers[row_ticker[i]];
    r.date = row_date[i];
    for (int v = 0; v < kNumCrLags; ++v) r.cr[v] = columns[v][i];
    for (int v = 0; v < kNumSviLags; ++v) r.dsvi[v] = columns[kNumCrLags + v][i];
    r.weekday = static_cast<Weekday>(static_cast<int>(columns[kVarWeekday][i]));
    r.industry = static_cast<SicDivision>(static_cast<int>(columns[kVarIndustry][i]));
    r.dvol = columns[kVarDvol][i];
    r.label = labels[i];
    return r;
}

std::pair<std::uint32_t, std::uint32_t> Panel::row_range(Date first, Date last) const {
    auto lo = std::lower_bound(row_date.begin(), row_date.end(), first);
    auto hi = std::upper_bound(row_date.begin(), row_date.end(), last);
    return {static_cast<std::uint32_t>(lo - row_date.begin()),
            static_cast<std::uint32_t>(hi - row_date.begin())};
}

std::pair<std::uint32_t, std::uint32_t> Panel::day_range(Date first, Date last) const {
    auto lo = std::lower_bound(days.begin(), days.end(), first);
    auto hi = std::upper_bound(days.begin(), days.end(), last);
    return {static_cast<std::uint32_t>(lo - days.begin()),
            static_cast<std::uint32_t>(hi - days.begin())};
}

double cumulative_return(std::span<const double> trailing_returns, int lag) {
    if (lag < 1) raise(ErrorCode::InvalidConfig, "cumulative return lag must be positive");
    if (trailing_returns.size() < static_cast<size_t>(lag))
        raise(ErrorCode::InsufficientHistory,
              "need " + std::to_string(lag) + " prior returns, have " +
                  std::to_string(trailing_returns.size()));
    double product = 1.0;
    for (int k = 1; k <= lag; ++k) product *= 1.0 + trailing_returns[trailing_returns.size() - k];
    return product;
}

double delta_svi(double svi_prev, double svi_cur) {
    if (svi_prev < 0.0 || svi_cur < 0.0)
        raise(ErrorCode::NegativeSvi, "SVI values must be nonnegative");
    if (svi_prev > 0.0) return (svi_cur - svi_prev) / svi_prev;
    if (svi_cur == 0.0) return 0.0;
    return 99.0;
}

double delta_volume(double v_t1, double v_t2) {
    if (v_t2 <= 0.0) raise(ErrorCode::ZeroPriorVolume, "prior volume must be positive");
    return (v_t1 - v_t2) / v_t2;
}

std::map<std::string, int> label_day(const std::map<std::string, double>& returns_on_t) {
    if (returns_on_t.size() < 2)
        raise(ErrorCode::DegenerateDay, "need at least 2 returns to label a day");
    std::vector<double> values;
    values.reserve(returns_on_t.size());
    for (const auto& [ticker, r] : returns_on_t) values.push_back(r);
    double median = median_of(std::move(values));
    std::map<std::string, int> labels;
    for (const auto& [ticker, r] : returns_on_t) labels[ticker] = r > median ? 1 : 0;
    return labels;
}

Panel build_panel(const MarketData& observations, const std::vector<StitchedSvi>& stitched_svi,
                  const std::vector<ConstituentRecord>& constituents, Date window_first,
                  Date window_last) {
    if (!observations.has_volumes)
        raise(ErrorCode::ConfigError, "panel construction requires dollar volumes (prices input)");
    if (window_last < window_first) raise(ErrorCode::InvalidConfig, "empty panel window");

    const TradingCalendar& cal = observations.calendar;

    struct Candidate {
        Date date;
        std::uint32_t ticker = 0;
        std::array<double, kNumPredictors> x{};
        double ret = 0.0;
    };

    Panel panel;
    std::vector<Candidate> rows;
    RemovalCounts& removals = panel.removals;

    // SIC division per ticker interval; industry can differ across intervals.
    std::map<std::string, std::vector<const ConstituentRecord*>> intervals;
    for (const auto& rec : constituents) intervals[rec.ticker].push_back(&rec);
    auto industry_on = [&](const std::string& ticker, Date day, SicDivision& out) {
        auto it = intervals.find(ticker);
        if (it == intervals.end()) return false;
        for (const auto* rec : it->second)
            if (rec->member_on(day)) {
                out = rec->sic_division;
                return true;
            }
        return false;
    };

    // Member days without an available same-day return are removed.
    auto cal_begin = std::lower_bound(cal.days.begin(), cal.days.end(), window_first);
    auto cal_end = std::upper_bound(cal.days.begin(), cal.days.end(), window_last);
    for (auto& [ticker, recs] : intervals) {
        const TickerSeries* series = observations.find(ticker);
        for (auto it = cal_begin; it != cal_end; ++it) {
            bool member = false;
            for (const auto* rec : recs) member = member || rec->member_on(*it);
            if (!member) continue;
            bool observed =
                series && std::binary_search(series->dates.begin(), series->dates.end(), *it);
            if (!observed) ++removals.missing_return;
        }
    }

    for (const auto& series : observations.series) {
        const StitchedSvi* svi = find_stitched(stitched_svi, series.ticker);
        std::uint32_t ticker_code = 0;  // assigned later
        bool ticker_seen = false;

        double cr_prefix[kNumCrLags];
        for (size_t i = 0; i < series.dates.size(); ++i) {
            Date day = series.dates[i];
            if (day < window_first || day > window_last) continue;
            SicDivision industry;
            if (!industry_on(series.ticker, day, industry)) continue;  // not a member that day

            // Predictors use information strictly before `day` only.
            if (i < static_cast<size_t>(kCrLags.back())) {
                ++removals.insufficient_history;
                continue;
            }
            double v_t1 = series.dollar_volumes[i - 1];
            double v_t2 = series.dollar_volumes[i - 2];
            if (v_t1 < 0.0 || v_t2 <= 0.0) {
                ++removals.missing_volume;
                continue;
            }

            Weekday wd = day.weekday();
            if (wd == Weekday::Sat || wd == Weekday::Sun)
                raise(ErrorCode::MalformedRow,
                      series.ticker + ": trading day on a weekend: " + day.to_string());

            Candidate c;
            c.date = day;
            c.ret = series.returns[i];

            double product = 1.0;
            int next_lag = 0;
            for (int k = 1; k <= kCrLags.back(); ++k) {
                product *= 1.0 + series.returns[i - k];
                if (k == kCrLags[next_lag]) cr_prefix[next_lag++] = product;
            }
            for (int v = 0; v < kNumCrLags; ++v) c.x[v] = cr_prefix[v];

            std::ptrdiff_t g = cal.index_of(day);
            for (int d = 1; d <= kNumSviLags; ++d) {
                double cur = svi ? svi->value_on(cal.days[g - d]) : 0.0;
                double prev = svi ? svi->value_on(cal.days[g - d - 1]) : 0.0;
                c.x[kNumCrLags + d - 1] = delta_svi(prev, cur);
            }

            c.x[kVarWeekday] = static_cast<double>(static_cast<int>(wd));
            c.x[kVarIndustry] = static_cast<double>(static_cast<int>(industry));
            c.x[kVarDvol] = delta_volume(v_t1, v_t2);

            if (!ticker_seen) {
                ticker_code = static_cast<std::uint32_t>(panel.tickers.size());
                panel.tickers.push_back(series.ticker);
                ticker_seen = true;
            }
            c.ticker = ticker_code;
            rows.push_back(std::move(c));
        }
    }

    std::sort(rows.begin(), rows.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.date != b.date) return a.date < b.date;
        return panel.tickers[a.ticker] < panel.tickers[b.ticker];
    });

    // Per-day labeling over surviving rows; days with fewer than 2 rows are
    // dropped and recorded.
    size_t n = rows.size();
    panel.row_ticker.reserve(n);
    panel.row_date.reserve(n);
    for (auto& col : panel.columns) col.reserve(n);
    panel.labels.reserve(n);
    panel.realized_returns.reserve(n);

    size_t begin = 0;
    std::vector<double> day_returns;
    while (begin < n) {
        size_t end = begin;
        while (end < n && rows[end].date == rows[begin].date) ++end;
        size_t count = end - begin;
        if (count < 2) {
            ++removals.degenerate_days;
            removals.degenerate_day_rows += count;
            begin = end;
            continue;
        }
        day_returns.clear();
        for (size_t i = begin; i < end; ++i) day_returns.push_back(rows[i].ret);
        double median = median_of(day_returns);

        std::uint32_t row_begin = static_cast<std::uint32_t>(panel.row_date.size());
        for (size_t i = begin; i < end; ++i) {
            const Candidate& c = rows[i];
            panel.row_ticker.push_back(c.ticker);
            panel.row_date.push_back(c.date);
            for (int v = 0; v < kNumPredictors; ++v) panel.columns[v].push_back(c.x[v]);
            panel.labels.push_back(c.ret > median ? 1 : 0);
            panel.realized_returns.push_back(c.ret);
        }
        panel.days.push_back(rows[begin].date);
        panel.day_spans.emplace_back(row_begin, static_cast<std::uint32_t>(panel.row_date.size()));
        begin = end;
    }
    return panel;
}

void write_panel_csv(const std::string& path, const Panel& panel) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out << "ticker,date";
    for (int v = 0; v < kNumPredictors; ++v) out << ',' << predictor_name(v);
    out << ",label\n";
    char buf[32];
    for (size_t i = 0; i < panel.n_rows(); ++i) {
        out << panel.tickers[panel.row_ticker[i]] << ',' << panel.row_date[i].to_string();
        for (int v = 0; v < kNumPredictors; ++v) {
            if (v == kVarWeekday) {
                out << ',' << weekday_name(static_cast<Weekday>(static_cast<int>(panel.columns[v][i])));
            } else if (v == kVarIndustry) {
                out << ','
                    << sic_division_name(static_cast<SicDivision>(static_cast<int>(panel.columns[v][i])));
            } else {
                std::snprintf(buf, sizeof(buf), "%.12g", panel.columns[v][i]);
                out << ',' << buf;
            }
        }
        out << ',' << static_cast<int>(panel.labels[i]) << '\n';
    }
}

}  // namespace statarb
