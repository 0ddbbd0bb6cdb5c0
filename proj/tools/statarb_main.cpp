// statarb_main.cpp
// Command-line front end for the statarb shared library. Talks to the core
// exclusively through the C API in statarb/statarb.h.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "statarb/statarb.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ConfigHandle {
    sa_config_t* ptr = nullptr;
    ~ConfigHandle() { sa_config_free(ptr); }
};

int status_to_exit(sa_status status) {
    if (status == SA_OK) return kExitOk;
    if (status == SA_E_CONFIG || status == SA_E_INVALID_CONFIG) return kExitUsage;
    return kExitFailure;
}

int fail(sa_status status) {
    std::fprintf(stderr, "error: %s\n", sa_last_error());
    return status_to_exit(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walk-forward statistical-arbitrage research pipeline"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string config_file;
    std::vector<std::string> overrides;
    std::string data_dir, out_dir, seed, threads, specs, profile;
    app.add_option("--config", config_file, "Plain-text key = value configuration file");
    app.add_option("--set", overrides, "Override a configuration key, key=value")
        ->type_name("KEY=VALUE");
    app.add_option("--data", data_dir, "Input data directory");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Top-level random seed");
    app.add_option("--threads", threads, "Worker pool size (0 = all cores)");

    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
    std::string tickers, years, start_year, signal, signal_vars, missing_rate;
    synth->add_option("--tickers", tickers, "Number of tickers");
    synth->add_option("--years", years, "Number of calendar years");
    synth->add_option("--start-year", start_year, "First calendar year");
    synth->add_option("--signal", signal, "Planted signal strength (>= 0)");
    synth->add_option("--signal-vars", signal_vars, "Comma list of signal predictors, e.g. cr_1");
    synth->add_option("--missing-rate", missing_rate, "Share of zeroed SVI observations");

    auto* ingest_check = app.add_subcommand("ingest-check", "Validate the input dataset");
    auto* stitch = app.add_subcommand("stitch", "Stitch daily SVI fragments and emit diagnostics");
    auto* panel = app.add_subcommand("panel", "Build and export the feature panel");
    auto* run = app.add_subcommand("run", "Run the full walk-forward study");
    run->add_option("--specs", specs, "Comma list of model specs (default: all)");
    run->add_option("--profile", profile, "baseline or robustness");
    auto* report = app.add_subcommand("report", "Print the summary of a finished run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ConfigHandle config;
    sa_status status = sa_config_create(&config.ptr);
    if (status != SA_OK) return fail(status);

    // Precedence: defaults < file < environment < explicit flags.
    if (!config_file.empty()) {
        if ((status = sa_config_load_file(config.ptr, config_file.c_str())) != SA_OK)
            return fail(status);
    }
    if ((status = sa_config_apply_env(config.ptr)) != SA_OK) return fail(status);

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& item : overrides) {
        size_t eq = item.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got \"%s\"\n", item.c_str());
            return kExitUsage;
        }
        pairs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    auto flag = [&](const std::string& key, const std::string& value) {
        if (!value.empty()) pairs.emplace_back(key, value);
    };
    flag("data_dir", data_dir);
    flag("out_dir", out_dir);
    flag("seed", seed);
    flag("threads", threads);
    flag("specs", specs);
    flag("profile", profile);
    flag("synth_tickers", tickers);
    flag("synth_years", years);
    flag("synth_start_year", start_year);
    flag("synth_signal_strength", signal);
    flag("synth_signal_vars", signal_vars);
    flag("synth_missing_rate", missing_rate);

    for (const auto& [key, value] : pairs)
        if ((status = sa_config_set(config.ptr, key.c_str(), value.c_str())) != SA_OK)
            return fail(status);

    char* text = nullptr;
    if (synth->parsed()) {
        status = sa_cmd_synth(config.ptr);
        if (status == SA_OK) std::printf("dataset written\n");
    } else if (ingest_check->parsed()) {
        status = sa_cmd_ingest_check(config.ptr, &text);
    } else if (stitch->parsed()) {
        status = sa_cmd_stitch(config.ptr);
        if (status == SA_OK) std::printf("stitched series and diagnostics written\n");
    } else if (panel->parsed()) {
        status = sa_cmd_panel(config.ptr, &text);
    } else if (run->parsed()) {
        status = sa_cmd_run(config.ptr, &text);
    } else if (report->parsed()) {
        status = sa_cmd_report(config.ptr, &text);
    }

    if (text) {
        std::fputs(text, stdout);
        sa_string_free(text);
    }
    if (status != SA_OK) return fail(status);
    return kExitOk;
}
