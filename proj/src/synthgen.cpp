#include "statarb/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "statarb/csv.hpp"
#include "statarb/dates.hpp"
#include "statarb/features.hpp"
#include "statarb/ingest.hpp"
#include "statarb/rng.hpp"

namespace statarb {

namespace {

constexpr double kDailyVol = 0.02;
constexpr double kReturnClamp = 0.45;  // keeps heavy-tailed draws above -100%

double round_to(double x, double scale) { return std::round(x * scale) / scale; }

std::string ticker_name(int i) {
    std::string name(3, 'A');
    name[0] = static_cast<char>('A' + (i / 676) % 26);
    name[1] = static_cast<char>('A' + (i / 26) % 26);
    name[2] = static_cast<char>('A' + i % 26);
    return name;
}

struct SignalVar {
    enum class Kind { CrLag, SviLag, Dvol } kind;
    int lag = 0;
};

SignalVar parse_signal_var(const std::string& name) {
    if (name == "dvol") return {SignalVar::Kind::Dvol, 0};
    if (name.rfind("cr_", 0) == 0) {
        int lag = std::atoi(name.c_str() + 3);
        for (int d : kCrLags)
            if (d == lag) return {SignalVar::Kind::CrLag, lag};
    }
    if (name.rfind("dsvi_", 0) == 0) {
        int lag = std::atoi(name.c_str() + 5);
        if (lag >= 1 && lag <= kNumSviLags) return {SignalVar::Kind::SviLag, lag};
    }
    raise(ErrorCode::InvalidConfig, "unsupported signal variable \"" + name + "\"");
}

}  // namespace

void SynthConfig::validate() const {
    if (n_tickers < 1) raise(ErrorCode::InvalidConfig, "n_tickers must be positive");
    if (n_tickers > 17576) raise(ErrorCode::InvalidConfig, "n_tickers exceeds ticker namespace");
    if (years < 1) raise(ErrorCode::InvalidConfig, "years must be positive");
    if (signal_strength < 0.0) raise(ErrorCode::InvalidConfig, "signal_strength must be >= 0");
    if (!(svi_missing_rate >= 0.0 && svi_missing_rate <= 1.0))
        raise(ErrorCode::InvalidConfig, "svi_missing_rate must be in [0, 1]");
    if (out_dir.empty()) raise(ErrorCode::InvalidConfig, "out_dir must be set");
    for (const auto& name : signal_variables) parse_signal_var(name);
}

SynthFiles synth_file_names(const std::string& out_dir) {
    SynthFiles f;
    f.constituents = out_dir + "/constituents.csv";
    f.returns = out_dir + "/returns.csv";
    f.prices = out_dir + "/prices.csv";
    f.svi_daily = out_dir + "/svi_daily.csv";
    f.svi_monthly = out_dir + "/svi_monthly.csv";
    f.truth = out_dir + "/truth.csv";
    return f;
}

SynthFiles generate(const SynthConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    SynthFiles files = synth_file_names(config.out_dir);

    const int n = config.n_tickers;
    Date first_day(config.start_year, 1, 1);
    Date last_day(config.start_year + config.years - 1, 12, 31);

    std::vector<Date> calendar_days;  // every civil day, weekends included
    std::vector<Date> trading_days;   // weekdays
    for (Date d = first_day; d <= last_day; d = d + 1) {
        calendar_days.push_back(d);
        Weekday w = d.weekday();
        if (w != Weekday::Sat && w != Weekday::Sun) trading_days.push_back(d);
    }
    const size_t n_cal = calendar_days.size();
    const size_t n_trad = trading_days.size();

    std::vector<SignalVar> signal_vars;
    for (const auto& name : config.signal_variables) signal_vars.push_back(parse_signal_var(name));

    // --- Latent search interest, AR(1) in logs over the civil calendar. ---
    // masked_interest is zeroed where the source has no reliable data.
    std::vector<std::vector<double>> masked_interest(n, std::vector<double>(n_cal, 0.0));
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(config.seed, "synth/svi/" + ticker_name(i)));
        double x = 0.0;
        for (size_t d = 0; d < n_cal; ++d) {
            x = 0.97 * x + 0.15 * rng.normal();
            double w = 20.0 * std::exp(x);
            bool masked = rng.uniform01() < config.svi_missing_rate;
            masked_interest[i][d] = masked ? 0.0 : w;
        }
    }

    // --- Per-month quantization: integer daily fragments (max 100 or all
    // zero) plus a real-valued monthly level rescaled to a per-ticker max of
    // 100. The retained latent series is exactly fragment * level / 100, the
    // value stitching has to reproduce. ---
    std::vector<size_t> month_start;  // indices into calendar_days
    for (size_t d = 0; d < n_cal; ++d)
        if (d == 0 || YearMonth(calendar_days[d]) != YearMonth(calendar_days[d - 1]))
            month_start.push_back(d);
    month_start.push_back(n_cal);
    const size_t n_months = month_start.size() - 1;

    std::vector<std::vector<int>> daily_value(n, std::vector<int>(n_cal, 0));
    std::vector<std::vector<double>> monthly_level(n, std::vector<double>(n_months, 0.0));
    std::vector<std::vector<double>> latent(n, std::vector<double>(n_cal, 0.0));
    for (int i = 0; i < n; ++i) {
        std::vector<double> raw_level(n_months, 0.0);
        for (size_t m = 0; m < n_months; ++m) {
            size_t begin = month_start[m], end = month_start[m + 1];
            double sum = 0.0, peak = 0.0;
            for (size_t d = begin; d < end; ++d) {
                sum += masked_interest[i][d];
                peak = std::max(peak, masked_interest[i][d]);
            }
            raw_level[m] = sum / static_cast<double>(end - begin);
            if (peak > 0.0)
                for (size_t d = begin; d < end; ++d)
                    daily_value[i][d] =
                        static_cast<int>(std::round(100.0 * masked_interest[i][d] / peak));
        }
        double level_peak = *std::max_element(raw_level.begin(), raw_level.end());
        for (size_t m = 0; m < n_months; ++m) {
            double level = level_peak > 0.0 ? 100.0 * raw_level[m] / level_peak : 0.0;
            monthly_level[i][m] = round_to(level, 1e4);
            for (size_t d = month_start[m]; d < month_start[m + 1]; ++d)
                latent[i][d] = daily_value[i][d] * (monthly_level[i][m] / 100.0);
        }
    }

    // --- Shares traded, positive lognormal counts. ---
    std::vector<std::vector<long long>> shares(n, std::vector<long long>(n_trad, 0));
    {
        Rng rng(derive_seed(config.seed, "synth/volume"));
        for (size_t t = 0; t < n_trad; ++t)
            for (int i = 0; i < n; ++i) {
                double v = 1e6 * std::exp(0.5 * rng.normal());
                shares[i][t] = std::max<long long>(1, static_cast<long long>(std::llround(v)));
            }
    }

    // --- Returns with the planted cross-sectional signal. ---
    // Day t returns are shifted by the standardized lagged signal value, so a
    // learner that recovers the signal variable can rank day-t outperformance
    // from information available at t-1.
    std::vector<std::vector<double>> price(n, std::vector<double>(n_trad, 0.0));
    std::vector<std::vector<double>> dividend(n, std::vector<double>(n_trad, 0.0));
    std::vector<std::vector<double>> ret(n, std::vector<double>(n_trad, 0.0));  // t >= 1
    std::vector<std::vector<double>> signal_score(n, std::vector<double>(n_trad, 0.0));
    std::vector<std::vector<double>> dollar_vol(n, std::vector<double>(n_trad, 0.0));

    // calendar index of each trading day, for latent-based signal lags
    std::vector<size_t> trad_to_cal(n_trad);
    {
        size_t c = 0;
        for (size_t t = 0; t < n_trad; ++t) {
            while (calendar_days[c] != trading_days[t]) ++c;
            trad_to_cal[t] = c;
        }
    }

    for (int i = 0; i < n; ++i) price[i][0] = round_to(50.0 + (i % 100), 1e8);

    Rng ret_rng(derive_seed(config.seed, "synth/returns"));
    std::vector<double> raw_signal(n, 0.0);
    std::vector<bool> has_signal(n, false);
    for (size_t t = 1; t < n_trad; ++t) {
        // dollar volumes through t-1 are known already
        for (int i = 0; i < n; ++i) dollar_vol[i][t - 1] = shares[i][t - 1] * price[i][t - 1];

        double z_mean = 0.0, z_sq = 0.0;
        size_t z_count = 0;
        for (int i = 0; i < n; ++i) {
            raw_signal[i] = 0.0;
            has_signal[i] = false;
            if (signal_vars.empty() || config.signal_strength == 0.0) continue;
            double total = 0.0;
            bool ok = !signal_vars.empty();
            for (const auto& sv : signal_vars) {
                switch (sv.kind) {
                    case SignalVar::Kind::CrLag: {
                        if (t < static_cast<size_t>(sv.lag) + 1) { ok = false; break; }
                        double product = 1.0;
                        for (int k = 1; k <= sv.lag; ++k) product *= 1.0 + ret[i][t - k];
                        total += product;
                        break;
                    }
                    case SignalVar::Kind::SviLag: {
                        size_t c = trad_to_cal[t];
                        if (c < static_cast<size_t>(sv.lag) + 1) { ok = false; break; }
                        double cur = latent[i][c - sv.lag];
                        double prev = latent[i][c - sv.lag - 1];
                        total += delta_svi(prev, cur);
                        break;
                    }
                    case SignalVar::Kind::Dvol: {
                        if (t < 3) { ok = false; break; }
                        double v1 = shares[i][t - 1] * price[i][t - 1];
                        double v2 = shares[i][t - 2] * price[i][t - 2];
                        total += (v1 - v2) / v2;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                raw_signal[i] = total;
                has_signal[i] = true;
                z_mean += total;
                z_sq += total * total;
                ++z_count;
            }
        }
        double z_std = 0.0;
        if (z_count > 1) {
            z_mean /= static_cast<double>(z_count);
            double var = z_sq / static_cast<double>(z_count) - z_mean * z_mean;
            z_std = var > 0.0 ? std::sqrt(var) : 0.0;
        }

        for (int i = 0; i < n; ++i) {
            double z = 0.0;
            if (has_signal[i] && z_std > 0.0) z = (raw_signal[i] - z_mean) / z_std;
            signal_score[i][t] = z;
            double r = kDailyVol * (ret_rng.student_t4() + config.signal_strength * z);
            r = std::clamp(r, -kReturnClamp, kReturnClamp);

            // Small quarterly dividend, price implied by the target return.
            double prev_price = price[i][t - 1];
            double div = (t % 63 == static_cast<size_t>(i % 63)) ? round_to(0.002 * prev_price, 1e8) : 0.0;
            double p = round_to(prev_price * (1.0 + r) - div, 1e8);
            if (p <= 0.0) {
                p = round_to(prev_price, 1e8);
                div = 0.0;
            }
            price[i][t] = p;
            dividend[i][t] = div;
            // The emitted return is re-derived from the rounded prices, so
            // ingest's cross-check sees bit-identical values.
            ret[i][t] = ((p - prev_price) + div) / prev_price;
        }
    }
    for (int i = 0; i < n; ++i)
        dollar_vol[i][n_trad - 1] = shares[i][n_trad - 1] * price[i][n_trad - 1];

    // --- Emit the ingest schemas. ---
    {
        std::ofstream out(files.constituents);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.constituents);
        out << "ticker,from_date,to_date,sic_division\n";
        for (int i = 0; i < n; ++i)
            out << ticker_name(i) << ',' << first_day.to_string() << ",,"
                << sic_division_name(static_cast<SicDivision>(i % kNumSicDivisions)) << '\n';
    }
    {
        std::ofstream out(files.returns);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.returns);
        out << "date,ticker,ret\n";
        char buf[40];
        for (size_t t = 1; t < n_trad; ++t)
            for (int i = 0; i < n; ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", ret[i][t]);
                out << trading_days[t].to_string() << ',' << ticker_name(i) << ',' << buf << '\n';
            }
    }
    {
        std::ofstream out(files.prices);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.prices);
        out << "date,ticker,close,dividend,shares_traded\n";
        for (size_t t = 0; t < n_trad; ++t)
            for (int i = 0; i < n; ++i)
                out << trading_days[t].to_string() << ',' << ticker_name(i) << ','
                    << format_fixed(price[i][t], 8) << ',' << format_fixed(dividend[i][t], 8) << ','
                    << shares[i][t] << '\n';
    }
    {
        std::ofstream out(files.svi_daily);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.svi_daily);
        out << "ticker,date,value\n";
        for (int i = 0; i < n; ++i)
            for (size_t d = 0; d < n_cal; ++d)
                out << ticker_name(i) << ',' << calendar_days[d].to_string() << ','
                    << daily_value[i][d] << '\n';
    }
    {
        std::ofstream out(files.svi_monthly);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.svi_monthly);
        out << "ticker,month,level\n";
        for (int i = 0; i < n; ++i)
            for (size_t m = 0; m < n_months; ++m)
                out << ticker_name(i) << ',' << YearMonth(calendar_days[month_start[m]]).to_string()
                    << ',' << format_fixed(monthly_level[i][m], 4) << '\n';
    }
    {
        std::ofstream out(files.truth);
        if (!out) raise(ErrorCode::IoError, "cannot write " + files.truth);
        out << "ticker,date,latent_svi,signal\n";
        char buf[40];
        for (int i = 0; i < n; ++i) {
            size_t t = 0;
            for (size_t d = 0; d < n_cal; ++d) {
                double sig = 0.0;
                if (t < n_trad && calendar_days[d] == trading_days[t]) {
                    sig = signal_score[i][t];
                    ++t;
                }
                std::snprintf(buf, sizeof(buf), "%.17g", latent[i][d]);
                out << ticker_name(i) << ',' << calendar_days[d].to_string() << ',' << buf << ','
                    << format_fixed(sig, 8) << '\n';
            }
        }
    }
    return files;
}

}  // namespace statarb
