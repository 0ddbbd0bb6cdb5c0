#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "oracles.hpp"
#include "statarb/features.hpp"
#include "statarb/rng.hpp"

using namespace statarb;
using test_oracles::make_panel_fixture;
using test_oracles::oracle_panel;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("cumulative returns") {
    std::vector<double> zeros(240, 0.0);
    CHECK(cumulative_return(zeros, 1) == 1.0);
    CHECK(cumulative_return(zeros, 240) == 1.0);

    std::vector<double> two = {0.01, 0.01};
    CHECK(cumulative_return(two, 2) == doctest::Approx(1.0201).epsilon(1e-12));

    CHECK(code_of([&] { cumulative_return(two, 3); }) == ErrorCode::InsufficientHistory);
}

TEST_CASE("cumulative return matches a brute-force product") {
    Rng rng(23);
    std::vector<double> returns;
    for (int i = 0; i < 240; ++i) returns.push_back(0.03 * rng.normal());
    double got = cumulative_return(returns, 240);
    double expected = 1.0;
    for (double r : returns) expected *= 1.0 + r;  // forward order, independent path
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cumulative return lags telescope") {
    Rng rng(29);
    std::vector<double> returns;
    for (int i = 0; i < 10; ++i) returns.push_back(0.02 * rng.normal());
    for (int d = 2; d <= 5; ++d) {
        double full = cumulative_return(returns, d);
        double chained = cumulative_return(returns, d - 1) * (1.0 + returns[returns.size() - d]);
        CHECK(full == doctest::Approx(chained).epsilon(1e-15));
    }
}

TEST_CASE("svi change handles the zero cases") {
    CHECK(delta_svi(0.0, 0.0) == 0.0);
    CHECK(delta_svi(0.0, 5.0) == 99.0);
    CHECK(delta_svi(50.0, 60.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(delta_svi(10.0, 0.0) == -1.0);  // drop to zero stays -1, not remapped
    CHECK(code_of([] { delta_svi(-1.0, 5.0); }) == ErrorCode::NegativeSvi);
}

TEST_CASE("svi change range property") {
    // For prev > 0 the value is >= -1 with equality only at cur == 0; the
    // sentinel 99 appears only for prev == 0, cur > 0.
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        double prev = rng.uniform01() < 0.3 ? 0.0 : 100.0 * rng.uniform01();
        double cur = rng.uniform01() < 0.3 ? 0.0 : 100.0 * rng.uniform01();
        double v = delta_svi(prev, cur);
        if (prev > 0.0) {
            CHECK(v >= -1.0);
            if (cur == 0.0)
                CHECK(v == -1.0);
            else
                CHECK(v > -1.0);
        } else {
            CHECK(v == (cur > 0.0 ? 99.0 : 0.0));
        }
    }
}

TEST_CASE("volume change") {
    CHECK(delta_volume(100.0, 100.0) == 0.0);
    CHECK(delta_volume(110.0, 100.0) == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(code_of([] { delta_volume(100.0, 0.0); }) == ErrorCode::ZeroPriorVolume);
}

TEST_CASE("daily labels split at the median") {
    std::map<std::string, double> returns = {{"A", 0.02}, {"B", 0.00}, {"C", -0.01}};
    auto labels = label_day(returns);
    CHECK(labels.at("A") == 1);
    CHECK(labels.at("B") == 0);  // ties with the median get 0
    CHECK(labels.at("C") == 0);

    std::map<std::string, double> even = {{"A", 0.01}, {"B", 0.03}};
    labels = label_day(even);
    CHECK(labels.at("A") == 0);
    CHECK(labels.at("B") == 1);

    CHECK(code_of([] { label_day({{"A", 0.01}}); }) == ErrorCode::DegenerateDay);
}

TEST_CASE("labels match a brute-force sort oracle on 100 tickers") {
    Rng rng(37);
    std::map<std::string, double> returns;
    for (int i = 0; i < 100; ++i)
        returns["N" + std::to_string(100 + i)] = 0.02 * rng.normal();
    auto labels = label_day(returns);

    std::vector<double> sorted;
    for (auto& [t, r] : returns) sorted.push_back(r);
    std::sort(sorted.begin(), sorted.end());
    double median = 0.5 * (sorted[49] + sorted[50]);

    int ones = 0;
    for (auto& [ticker, r] : returns) {
        CHECK(labels.at(ticker) == (r > median ? 1 : 0));
        ones += labels.at(ticker);
    }
    CHECK(ones <= 50);
}

TEST_CASE("panel row count on a 10-ticker, 600-day fixture") {
    auto fx = make_panel_fixture(10, 600, 101);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);

    // enumeration oracle: each ticker contributes days with index >= 240
    auto expected = oracle_panel(fx, fx.first_day, fx.last_day);
    CHECK(panel.n_rows() == expected.size());
    CHECK(panel.n_rows() == 10u * 360u);
    CHECK(panel.removals.insufficient_history == 10u * 240u);
    CHECK(panel.removals.missing_volume == 0);
    CHECK(panel.removals.missing_return == 0);
}

TEST_CASE("panel rows match the pointwise oracle") {
    auto fx = make_panel_fixture(10, 600, 103);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    auto expected = oracle_panel(fx, fx.first_day, fx.last_day);
    REQUIRE(panel.n_rows() == expected.size());

    for (size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        CHECK(panel.tickers[panel.row_ticker[i]] == expected[i].ticker);
        CHECK(panel.row_date[i] == expected[i].date);
        for (int v = 0; v < kNumPredictors; ++v) {
            CAPTURE(v);
            CHECK(panel.columns[v][i] ==
                  doctest::Approx(expected[i].predictors[v]).epsilon(1e-12));
        }
        CHECK(static_cast<int>(panel.labels[i]) == expected[i].label);
    }
}

TEST_CASE("tickers listed under 240 days contribute no rows") {
    auto fx = make_panel_fixture(3, 100, 107);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    CHECK(panel.n_rows() == 0);
    CHECK(panel.removals.insufficient_history == 300);
}

TEST_CASE("panel requires volume data") {
    auto fx = make_panel_fixture(3, 300, 109);
    fx.market.has_volumes = false;
    CHECK(code_of([&] {
              build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
          }) == ErrorCode::ConfigError);
}

TEST_CASE("zero prior volume removes the row and is counted") {
    auto fx = make_panel_fixture(4, 300, 113);
    // zero out one volume observation; rows needing it as V_{t-2} drop
    fx.market.series[0].dollar_volumes[250] = 0.0;
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    CHECK(panel.removals.missing_volume == 1);

    auto expected = oracle_panel(fx, fx.first_day, fx.last_day);
    CHECK(panel.n_rows() == expected.size());
}

TEST_CASE("member days without observations are counted as missing returns") {
    auto fx = make_panel_fixture(3, 300, 127);
    // drop the last 10 observations of one ticker entirely
    auto& series = fx.market.series[1];
    series.dates.resize(290);
    series.returns.resize(290);
    series.dollar_volumes.resize(290);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    CHECK(panel.removals.missing_return == 10);
}

TEST_CASE("no look-ahead: truncating future data leaves predictors unchanged") {
    auto fx = make_panel_fixture(6, 320, 131);
    Panel full = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    REQUIRE(full.days.size() > 10);

    Date cut = full.days[full.days.size() - 5];

    // keep observations through `cut` only (day-of-cut returns stay for labels)
    auto truncated = fx;
    for (auto& series : truncated.market.series) {
        size_t keep = 0;
        while (keep < series.dates.size() && series.dates[keep] <= cut) ++keep;
        series.dates.resize(keep);
        series.returns.resize(keep);
        series.dollar_volumes.resize(keep);
    }
    while (!truncated.market.calendar.days.empty() &&
           truncated.market.calendar.days.back() > cut)
        truncated.market.calendar.days.pop_back();
    for (auto& svi : truncated.stitched)
        while (!svi.series.empty() && svi.series.back().first > cut) svi.series.pop_back();

    Panel part = build_panel(truncated.market, truncated.stitched, truncated.constituents,
                             fx.first_day, cut);

    auto [begin_full, end_full] = full.row_range(cut, cut);
    auto [begin_part, end_part] = part.row_range(cut, cut);
    REQUIRE(end_full - begin_full > 0);
    REQUIRE(end_full - begin_full == end_part - begin_part);
    for (std::uint32_t k = 0; k < end_full - begin_full; ++k) {
        for (int v = 0; v < kNumPredictors; ++v)
            CHECK(full.columns[v][begin_full + k] == part.columns[v][begin_part + k]);
        CHECK(full.labels[begin_full + k] == part.labels[begin_part + k]);
    }
}

TEST_CASE("per-day label sums never exceed half the day's rows") {
    auto fx = make_panel_fixture(9, 400, 137);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    for (size_t d = 0; d < panel.days.size(); ++d) {
        auto [begin, end] = panel.day_spans[d];
        int ones = 0;
        for (std::uint32_t i = begin; i < end; ++i) ones += panel.labels[i];
        CHECK(ones * 2 <= static_cast<int>(end - begin));
    }
}

TEST_CASE("panel csv has the fixed column order") {
    auto fx = make_panel_fixture(3, 250, 139);
    Panel panel = build_panel(fx.market, fx.stitched, fx.constituents, fx.first_day, fx.last_day);
    test_helpers::TempDir dir("panel");
    write_panel_csv(dir.file("panel.csv"), panel);
    std::string content = test_helpers::read_file(dir.file("panel.csv"));
    std::string header = content.substr(0, content.find('\n'));
    CHECK(header ==
          "ticker,date,cr_1,cr_2,cr_3,cr_4,cr_5,cr_10,cr_15,cr_20,cr_40,cr_60,cr_120,cr_180,"
          "cr_240,dsvi_1,dsvi_2,dsvi_3,dsvi_4,dsvi_5,weekday,industry,dvol,label");
}
