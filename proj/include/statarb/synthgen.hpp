// synthgen.hpp
// Seeded synthetic universes: constituents, returns, prices, volumes and
// search-volume fragments with a controllable planted signal linking lagged
// predictors to next-day outperformance. A truth sidecar retains the latent
// search series and the per-day signal scores for oracle-based tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statarb/errors.hpp"

namespace statarb {

struct SynthConfig {
    int n_tickers = 20;
    int years = 13;
    int start_year = 2005;
    double signal_strength = 0.0;  // scales standardized signal vs unit noise
    std::vector<std::string> signal_variables;  // cr_<d>, dsvi_<d>, dvol
    double svi_missing_rate = 0.3;
    std::uint64_t seed = 0;
    std::string out_dir;

    void validate() const;
};

struct SynthFiles {
    std::string constituents;
    std::string returns;
    std::string prices;
    std::string svi_daily;
    std::string svi_monthly;
    std::string truth;
};

SynthFiles synth_file_names(const std::string& out_dir);

// Writes the full ingest dataset plus truth.csv into config.out_dir.
SynthFiles generate(const SynthConfig& config);

}  // namespace statarb
