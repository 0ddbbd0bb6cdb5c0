#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "helpers.hpp"
#include "statarb/csv.hpp"
#include "statarb/features.hpp"
#include "statarb/ingest.hpp"
#include "statarb/pipeline.hpp"
#include "statarb/svi.hpp"
#include "statarb/synthgen.hpp"

using namespace statarb;
using test_helpers::TempDir;

namespace {

SynthConfig small_config(const std::string& out_dir, std::uint64_t seed) {
    SynthConfig config;
    config.n_tickers = 6;
    config.years = 2;
    config.start_year = 2005;
    config.svi_missing_rate = 0.3;
    config.seed = seed;
    config.out_dir = out_dir;
    return config;
}

// ticker -> date -> value maps loaded from truth.csv
struct Truth {
    std::map<std::string, std::map<Date, double>> latent;
    std::map<std::string, std::map<Date, double>> signal;
};

Truth load_truth(const std::string& path) {
    Truth truth;
    CsvReader in(path, {"ticker", "date", "latent_svi", "signal"});
    while (in.next()) {
        Date d = Date::parse(in.field(1));
        truth.latent[in.field(0)][d] = in.parse_double(2);
        truth.signal[in.field(0)][d] = in.parse_double(3);
    }
    return truth;
}

}  // namespace

TEST_CASE("generation is seed-deterministic byte for byte") {
    TempDir a("synth"), b("synth"), c("synth");
    generate(small_config(a.str(), 7));
    generate(small_config(b.str(), 7));
    generate(small_config(c.str(), 8));

    for (const char* name : {"constituents.csv", "returns.csv", "prices.csv", "svi_daily.csv",
                             "svi_monthly.csv", "truth.csv"}) {
        CHECK(hash_file(a.file(name)) == hash_file(b.file(name)));
    }
    CHECK(hash_file(a.file("returns.csv")) != hash_file(c.file("returns.csv")));
}

TEST_CASE("generated dataset passes ingestion and cross-checks") {
    TempDir dir("synth");
    SynthFiles files = generate(small_config(dir.str(), 11));

    auto constituents = load_constituents(files.constituents);
    CHECK(constituents.size() == 6);

    // returns.csv and prices.csv must agree bit-exactly through Eq. 1
    MarketData md = load_market_data(files.returns, files.prices);
    CHECK(md.series.size() == 6);
    CHECK(md.has_volumes);
    for (const auto& series : md.series) {
        CHECK(series.dates.size() >= 500);
        for (double v : series.dollar_volumes) CHECK(v > 0.0);
        for (double r : series.returns) CHECK(r > -1.0);
    }
}

TEST_CASE("generated fragments satisfy the source invariants") {
    TempDir dir("synth");
    SynthFiles files = generate(small_config(dir.str(), 13));
    auto fragments = load_svi_daily(files.svi_daily);  // validates max-100-or-all-zero
    CHECK_FALSE(fragments.empty());
    for (const auto& f : fragments) {
        int peak = 0;
        for (auto& [d, v] : f.values) peak = std::max(peak, v);
        CHECK((peak == 100 || peak == 0));
    }
    auto monthly = load_svi_monthly(files.svi_monthly);  // validates contiguity
    CHECK(monthly.size() == 6);
    for (const auto& m : monthly) {
        double top = 0.0;
        for (auto& [ym, level] : m.levels) top = std::max(top, level);
        CHECK(top == doctest::Approx(100.0));
    }
}

TEST_CASE("stitching the generated fragments recovers the latent series") {
    TempDir dir("synth");
    SynthConfig config = small_config(dir.str(), 17);
    SynthFiles files = generate(config);

    auto fragments = load_svi_daily(files.svi_daily);
    auto monthly = load_svi_monthly(files.svi_monthly);
    Truth truth = load_truth(files.truth);

    for (const auto& m : monthly) {
        std::vector<SviFragment> mine;
        for (const auto& f : fragments)
            if (f.ticker == m.ticker) mine.push_back(f);
        StitchedSvi stitched_svi = stitch(mine, m);
        const auto& latent = truth.latent.at(m.ticker);
        REQUIRE(stitched_svi.series.size() == latent.size());
        for (const auto& [date, value] : stitched_svi.series) {
            double expected = latent.at(date);
            if (expected == 0.0)
                CHECK(value == 0.0);
            else
                CHECK(value == doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("zero share tracks the configured missing rate") {
    TempDir dir("synth");
    SynthConfig config = small_config(dir.str(), 19);
    config.n_tickers = 10;
    config.svi_missing_rate = 0.4;
    SynthFiles files = generate(config);

    auto fragments = load_svi_daily(files.svi_daily);
    size_t zeros = 0, total = 0;
    for (const auto& f : fragments)
        for (auto& [d, v] : f.values) {
            zeros += v == 0;
            ++total;
        }
    double rate = static_cast<double>(zeros) / total;
    // masking drives the rate; integer rounding adds a few extra zeros
    CHECK(rate >= 0.38);
    CHECK(rate <= 0.45);
}

TEST_CASE("without a planted signal the truth scores are zero") {
    TempDir dir("synth");
    SynthConfig config = small_config(dir.str(), 23);
    SynthFiles files = generate(config);
    Truth truth = load_truth(files.truth);
    for (const auto& [ticker, by_date] : truth.signal)
        for (const auto& [date, s] : by_date) CHECK(s == 0.0);
}

TEST_CASE("a planted cr_1 signal makes yesterday's winners outperform") {
    TempDir dir("synth");
    SynthConfig config = small_config(dir.str(), 29);
    config.n_tickers = 12;
    config.years = 3;
    config.signal_strength = 2.0;
    config.signal_variables = {"cr_1"};
    SynthFiles files = generate(config);

    MarketData md = load_market_data(files.returns, files.prices);
    // correlate day-t cross-sectional rank with day-(t-1) rank
    size_t n_days = md.calendar.days.size();
    double agree = 0.0, pairs = 0.0;
    for (size_t t = 2; t + 1 < n_days; t += 3) {
        Date day = md.calendar.days[t];
        Date prev = md.calendar.days[t - 1];
        std::vector<std::pair<double, double>> both;
        for (const auto& series : md.series) {
            double r_now = 0.0, r_prev = 0.0;
            bool has_now = false, has_prev = false;
            for (size_t i = 0; i < series.dates.size(); ++i) {
                if (series.dates[i] == day) {
                    r_now = series.returns[i];
                    has_now = true;
                }
                if (series.dates[i] == prev) {
                    r_prev = series.returns[i];
                    has_prev = true;
                }
            }
            if (has_now && has_prev) both.emplace_back(r_prev, r_now);
        }
        for (size_t i = 0; i < both.size(); ++i)
            for (size_t j = i + 1; j < both.size(); ++j) {
                double concordant = (both[i].first - both[j].first) * (both[i].second - both[j].second);
                agree += concordant > 0 ? 1.0 : 0.0;
                pairs += 1.0;
            }
    }
    CHECK(pairs > 100.0);
    CHECK(agree / pairs > 0.62);  // strongly concordant ranks
}

TEST_CASE("invalid generator configurations are rejected") {
    TempDir dir("synth");
    auto config = small_config(dir.str(), 31);
    config.svi_missing_rate = 1.5;
    CHECK_THROWS_AS(generate(config), Error);

    config = small_config(dir.str(), 31);
    config.signal_variables = {"weekday"};
    CHECK_THROWS_AS(generate(config), Error);

    config = small_config(dir.str(), 31);
    config.n_tickers = 0;
    CHECK_THROWS_AS(generate(config), Error);
}

TEST_CASE("generated data feeds the panel builder end to end") {
    TempDir dir("synth");
    SynthConfig config = small_config(dir.str(), 37);
    config.n_tickers = 8;
    config.years = 2;
    SynthFiles files = generate(config);

    auto constituents = load_constituents(files.constituents);
    MarketData md = load_market_data(files.returns, files.prices);
    auto fragments = load_svi_daily(files.svi_daily);
    auto monthly = load_svi_monthly(files.svi_monthly);
    std::vector<StitchedSvi> stitched;
    for (const auto& m : monthly) {
        std::vector<SviFragment> mine;
        for (const auto& f : fragments)
            if (f.ticker == m.ticker) mine.push_back(f);
        stitched.push_back(stitch(mine, m));
    }
    std::sort(stitched.begin(), stitched.end(),
              [](const StitchedSvi& a, const StitchedSvi& b) { return a.ticker < b.ticker; });

    Panel panel = build_panel(md, stitched, constituents, md.calendar.days.front(),
                              md.calendar.days.back());
    // two years minus the 240-day burn-in and the first return-less day
    size_t trading_days = md.calendar.days.size();
    CHECK(panel.days.size() == trading_days - 241);
    CHECK(panel.n_rows() == panel.days.size() * 8);
}
