#include "statarb/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "statarb/backtest.hpp"
#include "statarb/csv.hpp"
#include "statarb/features.hpp"
#include "statarb/ingest.hpp"
#include "statarb/metrics.hpp"
#include "statarb/rng.hpp"
#include "statarb/svi.hpp"
#include "statarb/synthgen.hpp"
#include "statarb/walkforward.hpp"

namespace statarb {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> keys = {
        {"data_dir", "data"},
        {"out_dir", "out"},
        {"constituents", ""},
        {"returns", ""},
        {"prices", ""},
        {"svi_daily", ""},
        {"svi_monthly", ""},
        {"study_start", ""},
        {"study_end", ""},
        {"specs", "all"},
        {"profile", "baseline"},
        {"trees", ""},
        {"shrinkage", ""},
        {"depth_grid", ""},
        {"bag_fraction", ""},
        {"min_node", ""},
        {"depth_mode", "depth"},
        {"kurtosis", "excess"},
        {"seed", "42"},
        {"threads", "0"},
        {"synth_tickers", "20"},
        {"synth_years", "13"},
        {"synth_start_year", "2005"},
        {"synth_signal_strength", "0"},
        {"synth_signal_vars", ""},
        {"synth_missing_rate", "0.3"},
    };
    return keys;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string input_path(const RunConfig& config, const std::string& key,
                       const std::string& file_name) {
    if (config.is_set(key)) return config.get(key);
    return config.get("data_dir") + "/" + file_name;
}

Date parse_date_key(const RunConfig& config, const std::string& key) {
    Date d;
    if (!Date::try_parse(config.get(key), d))
        raise(ErrorCode::ConfigError, key + " is not a valid ISO date: " + config.get(key));
    return d;
}

int resolve_threads(const RunConfig& config) {
    long long n = config.get_int("threads");
    if (n < 0) raise(ErrorCode::ConfigError, "threads must be >= 0");
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<int>(n);
}

}  // namespace

RunConfig::RunConfig() : values_(defaults()) {}

const std::map<std::string, std::string>& RunConfig::known_keys() { return defaults(); }

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) raise(ErrorCode::ConfigError, "unknown configuration key: " + key);
    it->second = value;
    touched_[key] = true;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open config file " + path);
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::ConfigError,
                  path + ":" + std::to_string(line_number) + ": expected key = value");
        set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
}

void RunConfig::apply_env() {
    for (const auto& [key, ignored] : values_) {
        std::string env_name = "STATARB_";
        for (char c : key) env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* value = std::getenv(env_name.c_str())) set(key, value);
    }
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) raise(ErrorCode::ConfigError, "unknown configuration key: " + key);
    return it->second;
}

bool RunConfig::is_set(const std::string& key) const {
    return !get(key).empty();  // validates the key
}

long long RunConfig::get_int(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        raise(ErrorCode::ConfigError, key + " must be an integer, got \"" + s + "\"");
    return v;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        raise(ErrorCode::ConfigError, key + " must be a number, got \"" + s + "\"");
    return v;
}

std::uint64_t RunConfig::get_seed() const {
    const std::string& s = get("seed");
    char* end = nullptr;
    std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        raise(ErrorCode::ConfigError, "seed must be an unsigned integer, got \"" + s + "\"");
    return v;
}

std::string RunConfig::canonical_text() const {
    std::string text;
    for (const auto& [key, value] : values_) text += key + " = " + value + "\n";
    return text;
}

std::uint64_t RunConfig::config_hash() const { return fnv1a64(canonical_text()); }

GbmProfile resolve_profile(const RunConfig& config) {
    GbmProfile profile;
    const std::string& name = config.get("profile");
    if (name == "baseline") {
        // defaults above
    } else if (name == "robustness") {
        profile.n_trees = 100;
        profile.shrinkage = 0.1;
    } else {
        raise(ErrorCode::ConfigError, "profile must be baseline or robustness, got " + name);
    }
    if (config.is_set("trees")) profile.n_trees = static_cast<int>(config.get_int("trees"));
    if (config.is_set("shrinkage")) profile.shrinkage = config.get_double("shrinkage");
    if (config.is_set("bag_fraction")) profile.bag_fraction = config.get_double("bag_fraction");
    if (config.is_set("min_node")) profile.min_node = static_cast<int>(config.get_int("min_node"));
    if (config.is_set("depth_grid")) {
        profile.depth_grid.clear();
        for (const auto& item : split_list(config.get("depth_grid")))
            profile.depth_grid.push_back(std::atoi(item.c_str()));
        if (profile.depth_grid.empty())
            raise(ErrorCode::ConfigError, "depth_grid must list at least one depth");
    }
    return profile;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot hash missing file " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

void cmd_synth(const RunConfig& config) {
    SynthConfig synth;
    synth.n_tickers = static_cast<int>(config.get_int("synth_tickers"));
    synth.years = static_cast<int>(config.get_int("synth_years"));
    synth.start_year = static_cast<int>(config.get_int("synth_start_year"));
    synth.signal_strength = config.get_double("synth_signal_strength");
    synth.signal_variables = split_list(config.get("synth_signal_vars"));
    synth.svi_missing_rate = config.get_double("synth_missing_rate");
    synth.seed = derive_seed(config.get_seed(), "synthgen");
    synth.out_dir = config.get("data_dir");
    generate(synth);
}

namespace {

struct Inputs {
    std::vector<ConstituentRecord> constituents;
    MarketData market;
    std::vector<StitchedSvi> stitched;
};

Inputs load_inputs(const RunConfig& config, bool need_svi = true) {
    Inputs in;
    in.constituents = load_constituents(input_path(config, "constituents", "constituents.csv"));

    std::optional<std::string> returns_path;
    std::optional<std::string> prices_path;
    std::string returns_file = input_path(config, "returns", "returns.csv");
    std::string prices_file = input_path(config, "prices", "prices.csv");
    if (fs::exists(returns_file)) returns_path = returns_file;
    if (fs::exists(prices_file)) prices_path = prices_file;
    in.market = load_market_data(returns_path, prices_path);

    if (need_svi) {
        auto fragments = load_svi_daily(input_path(config, "svi_daily", "svi_daily.csv"));
        auto monthly = load_svi_monthly(input_path(config, "svi_monthly", "svi_monthly.csv"));

        std::map<std::string, std::vector<SviFragment>> by_ticker;
        for (auto& f : fragments) by_ticker[f.ticker].push_back(std::move(f));
        for (auto& [ticker, frags] : by_ticker) {
            const MonthlySvi* m = nullptr;
            for (const auto& candidate : monthly)
                if (candidate.ticker == ticker) {
                    m = &candidate;
                    break;
                }
            if (!m)
                raise(ErrorCode::MissingMonthlyLevel, "no monthly series for ticker " + ticker);
            in.stitched.push_back(stitch(frags, *m));
        }
        std::sort(in.stitched.begin(), in.stitched.end(),
                  [](const StitchedSvi& a, const StitchedSvi& b) { return a.ticker < b.ticker; });
    }
    return in;
}

void study_range(const RunConfig& config, const MarketData& market, Date& first, Date& last) {
    if (market.calendar.days.empty()) raise(ErrorCode::EmptyPanel, "no trading days in input data");
    first = config.is_set("study_start") ? parse_date_key(config, "study_start")
                                         : market.calendar.days.front();
    last = config.is_set("study_end") ? parse_date_key(config, "study_end")
                                      : market.calendar.days.back();
    if (last < first) raise(ErrorCode::ConfigError, "study_end precedes study_start");
}

}  // namespace

void cmd_ingest_check(const RunConfig& config, std::ostream& report) {
    Inputs in = load_inputs(config);
    size_t svi_points = 0;
    for (const auto& s : in.stitched) svi_points += s.series.size();
    report << "constituents: " << in.constituents.size() << " records\n";
    report << "tickers with returns: " << in.market.series.size() << "\n";
    report << "trading days: " << in.market.calendar.days.size() << "\n";
    if (!in.market.calendar.days.empty())
        report << "calendar: " << in.market.calendar.days.front().to_string() << " .. "
               << in.market.calendar.days.back().to_string() << "\n";
    report << "volumes present: " << (in.market.has_volumes ? "yes" : "no") << "\n";
    report << "stitched svi series: " << in.stitched.size() << " (" << svi_points << " points)\n";
    report << "ingest ok\n";
}

void cmd_stitch(const RunConfig& config) {
    Inputs in = load_inputs(config);
    fs::create_directories(config.get("out_dir"));
    write_stitched(config.get("out_dir") + "/stitched.csv", in.stitched);

    // Mean SVI and zero-value share per trading day with 120-day rolling
    // means, the dataset diagnostics the study reports.
    Date first, last;
    study_range(config, in.market, first, last);
    std::vector<std::pair<Date, double>> mean_series, zero_series;
    for (Date day : in.market.calendar.days) {
        if (day < first || day > last) continue;
        auto members = membership_on(in.constituents, day);
        if (members.empty()) continue;
        double sum = 0.0;
        for (const auto& t : members) {
            const StitchedSvi* s = find_stitched(in.stitched, t);
            sum += s ? s->value_on(day) : 0.0;
        }
        mean_series.emplace_back(day, sum / static_cast<double>(members.size()));
        zero_series.emplace_back(day, zero_share(day, members, in.stitched));
    }
    auto mean_roll = rolling_mean(mean_series, 120);
    auto zero_roll = rolling_mean(zero_series, 120);

    std::ofstream out(config.get("out_dir") + "/svi_diagnostics.csv");
    if (!out) raise(ErrorCode::IoError, "cannot write svi_diagnostics.csv");
    out << "date,mean_svi,zero_share,mean_svi_120,zero_share_120\n";
    size_t roll_offset = mean_series.size() - mean_roll.size();
    for (size_t i = 0; i < mean_series.size(); ++i) {
        out << mean_series[i].first.to_string() << ',' << format_fixed(mean_series[i].second, 6)
            << ',' << format_fixed(zero_series[i].second, 6) << ',';
        if (i >= roll_offset)
            out << format_fixed(mean_roll[i - roll_offset].second, 6) << ','
                << format_fixed(zero_roll[i - roll_offset].second, 6);
        else
            out << ',';
        out << '\n';
    }
}

namespace {

Panel build_study_panel(const Inputs& in, Date first, Date last) {
    return build_panel(in.market, in.stitched, in.constituents, first, last);
}

void report_removals(const Panel& panel, std::ostream& report) {
    const RemovalCounts& r = panel.removals;
    report << "panel rows: " << panel.n_rows() << " over " << panel.days.size() << " days, "
           << panel.tickers.size() << " tickers\n";
    report << "removed observations: " << r.total_rows() << " (missing return " << r.missing_return
           << ", short history " << r.insufficient_history << ", missing volume "
           << r.missing_volume << ", degenerate days " << r.degenerate_day_rows << ")\n";
}

}  // namespace

void cmd_panel(const RunConfig& config, std::ostream& report) {
    Inputs in = load_inputs(config);
    Date first, last;
    study_range(config, in.market, first, last);
    Panel panel = build_study_panel(in, first, last);
    fs::create_directories(config.get("out_dir"));
    write_panel_csv(config.get("out_dir") + "/panel.csv", panel);
    report_removals(panel, report);
}

namespace {

std::vector<ModelSpec> selected_specs(const RunConfig& config) {
    std::vector<ModelSpec> all = model_specs();
    const std::string& wanted = config.get("specs");
    if (wanted == "all" || wanted.empty()) return all;
    std::vector<ModelSpec> chosen;
    for (const auto& name : split_list(wanted)) {
        const ModelSpec* spec = find_spec(all, name);
        if (!spec)
            raise(ErrorCode::ConfigError,
                  "unknown model spec \"" + name + "\" (valid: CR, SVI, GI, CR_SVI, CR_GI, "
                  "SVI_GI, CR_SVI_GI)");
        chosen.push_back(*spec);
    }
    if (chosen.empty()) raise(ErrorCode::ConfigError, "no model specs selected");
    return chosen;
}

GbmConfig base_gbm_config(const RunConfig& config, const GbmProfile& profile) {
    GbmConfig gbm;
    gbm.n_trees = profile.n_trees;
    gbm.shrinkage = profile.shrinkage;
    gbm.bag_fraction = profile.bag_fraction;
    gbm.min_node = profile.min_node;
    const std::string& mode = config.get("depth_mode");
    if (mode == "depth") {
        gbm.depth_mode = DepthMode::MaxDepth;
    } else if (mode == "splits") {
        gbm.depth_mode = DepthMode::TotalSplits;
    } else {
        raise(ErrorCode::ConfigError, "depth_mode must be depth or splits");
    }
    return gbm;
}

struct SpecEvaluation {
    std::string spec;
    BacktestLedger ledger;
    DailyAucSeries daily_auc;
    double pooled_auc = 0.0;
    std::vector<double> mean_importance;  // averaged over periods, max 100
    double t_zero = 0.0;
    double t_vs_index = 0.0;
};

std::string spec_period_file(const std::string& out_dir, const std::string& spec, int period) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%02d", period);
    return out_dir + "/predictions/" + spec + "_" + buf + ".csv";
}

}  // namespace

void cmd_run(const RunConfig& config, std::ostream& report) {
    Inputs in = load_inputs(config);
    Date first, last;
    study_range(config, in.market, first, last);

    std::vector<StudyPeriod> periods = make_periods(first, last);
    Panel panel = build_study_panel(in, first, last);
    report_removals(panel, report);

    std::vector<ModelSpec> specs = selected_specs(config);
    GbmProfile profile = resolve_profile(config);
    GbmConfig gbm = base_gbm_config(config, profile);
    std::uint64_t seed = config.get_seed();
    int threads = resolve_threads(config);

    report << "periods: " << periods.size() << ", specs: " << specs.size() << ", depth grid:";
    for (int d : profile.depth_grid) report << ' ' << d;
    report << ", trees: " << profile.n_trees << ", shrinkage: " << profile.shrinkage << "\n";

    WalkforwardResult wf =
        run_walkforward(panel, periods, specs, profile.depth_grid, gbm, seed, threads);
    assert_no_leakage(wf.fits);

    const std::string out_dir = config.get("out_dir");
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/predictions");
    fs::create_directories(out_dir + "/models");

    // Per (period, spec) prediction files and serialized models.
    for (const auto& run : wf.runs) {
        std::ofstream out(spec_period_file(out_dir, run.spec, run.period));
        if (!out) raise(ErrorCode::IoError, "cannot write prediction file for " + run.spec);
        out << "date,ticker,score,label\n";
        for (size_t i = 0; i < run.test_rows.size(); ++i) {
            std::uint32_t row = run.test_rows[i];
            out << panel.row_date[row].to_string() << ',' << panel.tickers[panel.row_ticker[row]]
                << ',' << format_fixed(run.scores[i], 8) << ','
                << static_cast<int>(panel.labels[row]) << '\n';
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "p%02d", run.period);
        std::ofstream model_out(out_dir + "/models/" + run.spec + "_" + buf + ".gbm");
        run.model.serialize(model_out);
    }

    {
        std::ofstream out(out_dir + "/cv_report.csv");
        out << "period,spec,depth,fold,auc\n";
        for (const auto& f : wf.fits) {
            if (f.kind != "cv") continue;
            out << f.period << ',' << f.spec << ',' << f.depth << ',' << f.fold << ',';
            if (f.auc_valid) out << format_fixed(f.auc, 6);
            out << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/fits.csv");
        out << "period,spec,kind,depth,fold,train_first,train_last,eval_first,eval_last,auc\n";
        for (const auto& f : wf.fits) {
            out << f.period << ',' << f.spec << ',' << f.kind << ',' << f.depth << ',' << f.fold
                << ',' << f.train_first.to_string() << ',' << f.train_last.to_string() << ','
                << f.eval_first.to_string() << ',' << f.eval_last.to_string() << ',';
            if (f.auc_valid) out << format_fixed(f.auc, 6);
            out << '\n';
        }
    }

    // Backtests and metrics per spec.
    bool excess_kurtosis = config.get("kurtosis") != "raw";
    std::vector<SpecEvaluation> evaluations;
    for (const auto& spec : specs) {
        SpecEvaluation eval;
        eval.spec = spec.name;

        std::vector<std::uint32_t> rows;
        std::vector<double> scores;
        std::vector<std::vector<double>> importances;
        for (const auto& run : wf.runs) {
            if (run.spec != spec.name) continue;
            rows.insert(rows.end(), run.test_rows.begin(), run.test_rows.end());
            scores.insert(scores.end(), run.scores.begin(), run.scores.end());
            importances.push_back(run.model.variable_importance());
        }
        eval.ledger = run_backtest(panel, spec.name, rows, scores);

        // Daily and pooled AUC over all test predictions.
        std::vector<DayScores> days;
        std::vector<ScoredLabel> pooled;
        size_t i = 0;
        while (i < rows.size()) {
            size_t j = i;
            DayScores day;
            day.date = panel.row_date[rows[i]];
            while (j < rows.size() && panel.row_date[rows[j]] == day.date) {
                day.scored.push_back({scores[j], panel.labels[rows[j]]});
                pooled.push_back(day.scored.back());
                ++j;
            }
            days.push_back(std::move(day));
            i = j;
        }
        eval.daily_auc = daily_auc_series(days);
        eval.pooled_auc = pooled.empty() ? 0.0 : auc(pooled);

        // Importance averaged across the period models, rescaled to max 100.
        eval.mean_importance.assign(spec.vars.size(), 0.0);
        for (const auto& imp : importances)
            for (size_t v = 0; v < imp.size(); ++v) eval.mean_importance[v] += imp[v];
        double peak = 0.0;
        for (double& v : eval.mean_importance) {
            v /= static_cast<double>(importances.size());
            peak = std::max(peak, v);
        }
        if (peak > 0.0)
            for (double& v : eval.mean_importance) v *= 100.0 / peak;

        std::vector<double> combined = eval.ledger.combined_series.values();
        if (combined.size() >= 2) {
            eval.t_zero = t_test_zero(combined);
            eval.t_vs_index = t_test_paired_vs_index(eval.ledger.combined_series.points,
                                                     eval.ledger.index_series.points);
        }
        evaluations.push_back(std::move(eval));
    }

    {
        std::ofstream out(out_dir + "/ledger.csv");
        out << "date,spec,side,ticker,score,realized_return\n";
        for (const auto& eval : evaluations) {
            for (const auto& day : eval.ledger.days) {
                for (size_t k = 0; k < day.longs.size(); ++k)
                    out << day.date.to_string() << ',' << eval.spec << ",long," << day.longs[k]
                        << ',' << format_fixed(day.long_scores[k], 8) << ','
                        << format_fixed(day.long_rets[k], 8) << '\n';
                for (size_t k = 0; k < day.shorts.size(); ++k)
                    out << day.date.to_string() << ',' << eval.spec << ",short," << day.shorts[k]
                        << ',' << format_fixed(day.short_scores[k], 8) << ','
                        << format_fixed(day.short_rets[k], 8) << '\n';
            }
        }
    }
    {
        std::ofstream out(out_dir + "/strategy_returns.csv");
        out << "date,spec,long,short,combined,index\n";
        for (const auto& eval : evaluations) {
            const auto& ledger = eval.ledger;
            for (size_t i = 0; i < ledger.combined_series.points.size(); ++i) {
                out << ledger.combined_series.points[i].first.to_string() << ',' << eval.spec << ','
                    << format_fixed(ledger.long_series.points[i].second, 8) << ','
                    << format_fixed(ledger.short_series.points[i].second, 8) << ','
                    << format_fixed(ledger.combined_series.points[i].second, 8) << ','
                    << format_fixed(ledger.index_series.points[i].second, 8) << '\n';
            }
        }
    }
    {
        std::ofstream out(out_dir + "/auc_report.csv");
        out << "spec,mean_daily_auc,pooled_auc,trend_slope,trend_t\n";
        for (const auto& eval : evaluations)
            out << eval.spec << ',' << format_fixed(eval.daily_auc.mean(), 6) << ','
                << format_fixed(eval.pooled_auc, 6) << ','
                << format_fixed(eval.daily_auc.trend.slope, 10) << ','
                << format_fixed(eval.daily_auc.trend.t_stat, 4) << '\n';
    }
    {
        std::ofstream out(out_dir + "/importance.csv");
        out << "spec,variable,importance\n";
        for (const auto& eval : evaluations) {
            const ModelSpec* spec = find_spec(specs, eval.spec);
            for (size_t v = 0; v < spec->vars.size(); ++v)
                out << eval.spec << ',' << predictor_name(spec->vars[v]) << ','
                    << format_fixed(eval.mean_importance[v], 4) << '\n';
        }
    }

    // Table-4-style statistics for combined, long-only and short-only books.
    auto write_stats = [&](const std::string& file, auto series_of) {
        std::ofstream out(out_dir + "/" + file);
        out << "statistic";
        for (const auto& eval : evaluations) out << ',' << eval.spec;
        out << ",INDEX\n";

        std::vector<ReturnStats> stats;
        for (const auto& eval : evaluations)
            stats.push_back(return_stats(series_of(eval.ledger).values(), excess_kurtosis));
        ReturnStats index_stats;
        {
            // One index column; every spec's index series agrees on common days.
            const BacktestLedger& ledger = evaluations.front().ledger;
            index_stats = return_stats(ledger.index_series.values(), excess_kurtosis);
        }
        auto row = [&](const char* name, auto member) {
            out << name;
            for (const auto& st : stats) out << ',' << format_fixed(member(st), 6);
            out << ',' << format_fixed(member(index_stats), 6) << '\n';
        };
        row("Minimum", [](const ReturnStats& s) { return s.min; });
        row("Quartile 1", [](const ReturnStats& s) { return s.q1; });
        row("Median", [](const ReturnStats& s) { return s.median; });
        row("Arithmetic Mean", [](const ReturnStats& s) { return s.arithmetic_mean; });
        row("Geometric Mean", [](const ReturnStats& s) { return s.geometric_mean; });
        row("Quartile 3", [](const ReturnStats& s) { return s.q3; });
        row("Maximum", [](const ReturnStats& s) { return s.max; });
        row("SE Mean", [](const ReturnStats& s) { return s.se_mean; });
        row("LCL Mean (0.95)", [](const ReturnStats& s) { return s.lcl95; });
        row("UCL Mean (0.95)", [](const ReturnStats& s) { return s.ucl95; });
        row("Variance", [](const ReturnStats& s) { return s.variance; });
        row("Stdev", [](const ReturnStats& s) { return s.stdev; });
        row("Skewness", [](const ReturnStats& s) { return s.skewness; });
        out << (excess_kurtosis ? "Kurtosis (excess)" : "Kurtosis (raw)");
        for (const auto& st : stats) out << ',' << format_fixed(st.kurtosis, 6);
        out << ',' << format_fixed(index_stats.kurtosis, 6) << '\n';
    };
    if (!evaluations.empty() && evaluations.front().ledger.combined_series.points.size() >= 2) {
        write_stats("stats_report.csv",
                    [](const BacktestLedger& l) -> const ReturnSeries& { return l.combined_series; });
        write_stats("stats_long.csv",
                    [](const BacktestLedger& l) -> const ReturnSeries& { return l.long_series; });
        write_stats("stats_short.csv",
                    [](const BacktestLedger& l) -> const ReturnSeries& { return l.short_series; });
    }

    {
        std::ofstream out(out_dir + "/tests.csv");
        out << "spec,t_zero,t_vs_index\n";
        for (const auto& eval : evaluations)
            out << eval.spec << ',' << format_fixed(eval.t_zero, 4) << ','
                << format_fixed(eval.t_vs_index, 4) << '\n';
    }

    // Sub-period cumulative returns; only defined for the 2007-2017 layout.
    {
        bool in_layout = true;
        for (const auto& eval : evaluations)
            for (const auto& [date, r] : eval.ledger.combined_series.points)
                in_layout = in_layout && date.year() >= 2007 && date.year() <= 2017;
        if (in_layout && !evaluations.empty()) {
            std::ofstream out(out_dir + "/subperiods.csv");
            out << "spec,subperiod,cumulative_return\n";
            auto emit = [&](const std::string& name, const ReturnSeries& series) {
                for (const auto& [sub_name, slice] : subperiods(series)) {
                    double cum = slice.points.empty() ? 0.0 : cumulative(slice).points.back().second;
                    out << name << ',' << sub_name << ',' << format_fixed(cum, 6) << '\n';
                }
            };
            for (const auto& eval : evaluations) emit(eval.spec, eval.ledger.combined_series);
            emit("INDEX", evaluations.front().ledger.index_series);
        }
    }

    // Human-readable summary.
    {
        std::ofstream out(out_dir + "/summary.txt");
        char hash_buf[32];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(config.config_hash()));
        out << "statarb run summary\n";
        out << "config hash: " << hash_buf << "  seed: " << config.get("seed") << "\n";
        out << "study: " << first.to_string() << " .. " << last.to_string() << " ("
            << periods.size() << " periods)\n";
        out << "panel: " << panel.n_rows() << " rows, " << panel.days.size() << " days, "
            << panel.tickers.size() << " tickers, " << panel.removals.total_rows()
            << " removed\n";
        size_t cv_fits = 0, final_fits = 0;
        for (const auto& f : wf.fits) (f.kind == "cv" ? cv_fits : final_fits) += 1;
        out << "fits: " << cv_fits << " cv, " << final_fits << " final\n\n";
        for (const auto& eval : evaluations) {
            const auto& combined = eval.ledger.combined_series;
            double mean_ret = 0.0;
            for (const auto& [d, r] : combined.points) mean_ret += r;
            if (!combined.points.empty()) mean_ret /= static_cast<double>(combined.points.size());
            double cum = combined.points.empty() ? 0.0 : cumulative(combined).points.back().second;
            out << eval.spec << ": mean daily auc " << format_fixed(eval.daily_auc.mean(), 4)
                << ", pooled auc " << format_fixed(eval.pooled_auc, 4) << ", mean daily return "
                << format_fixed(mean_ret, 6) << ", cumulative " << format_fixed(cum, 4)
                << ", t vs zero " << format_fixed(eval.t_zero, 2) << ", t vs index "
                << format_fixed(eval.t_vs_index, 2) << ", traded days "
                << combined.points.size() << ", skipped " << eval.ledger.skipped_days << "\n";
        }
    }

    // Manifest: configuration, seed and a fingerprint of every output file.
    {
        nlohmann::json manifest;
        char hash_buf[32];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(config.config_hash()));
        manifest["config_hash"] = hash_buf;
        manifest["seed"] = config.get("seed");
        nlohmann::json cfg = nlohmann::json::object();
        std::istringstream cfg_lines(config.canonical_text());
        std::string line;
        while (std::getline(cfg_lines, line)) {
            size_t eq = line.find(" = ");
            if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
        }
        manifest["config"] = cfg;
        nlohmann::json outputs = nlohmann::json::object();
        std::vector<std::string> paths;
        for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
            if (!entry.is_regular_file()) continue;
            std::string rel = fs::relative(entry.path(), out_dir).string();
            if (rel == "manifest.json") continue;
            paths.push_back(rel);
        }
        std::sort(paths.begin(), paths.end());
        for (const auto& rel : paths) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(hash_file(out_dir + "/" + rel)));
            outputs[rel] = buf;
        }
        manifest["outputs"] = outputs;
        std::ofstream out(out_dir + "/manifest.json");
        out << manifest.dump(2) << '\n';
    }

    report << "outputs written to " << out_dir << "\n";
}

void cmd_report(const RunConfig& config, std::ostream& report) {
    std::string summary = config.get("out_dir") + "/summary.txt";
    std::ifstream in(summary);
    if (!in)
        raise(ErrorCode::IoError, "no run summary at " + summary + "; run the pipeline first");
    report << in.rdbuf();
}

}  // namespace statarb
