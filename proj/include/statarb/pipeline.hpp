// pipeline.hpp
// Run configuration (flat key=value with environment overrides), the
// subcommand entry points behind the CLI and C API, report emission and the
// run manifest.

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "statarb/errors.hpp"

namespace statarb {

// Flat key=value configuration. Precedence is handled by application order:
// defaults, then file, then environment, then explicit sets.
class RunConfig {
public:
    RunConfig();

    void load_file(const std::string& path);
    void apply_env();  // STATARB_<KEY> overrides
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    bool is_set(const std::string& key) const;  // differs from the default

    long long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::uint64_t get_seed() const;

    // Canonical "key = value" listing, sorted by key.
    std::string canonical_text() const;
    std::uint64_t config_hash() const;

    static const std::map<std::string, std::string>& known_keys();  // key -> default

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> touched_;
};

struct GbmProfile {
    int n_trees = 500;
    double shrinkage = 0.02;
    std::vector<int> depth_grid = {4, 6, 8};
    double bag_fraction = 0.5;
    int min_node = 10;
};

// Baseline (500 trees, shrinkage 0.02) or robustness (100 trees, 0.1),
// with per-key overrides from the config applied on top.
GbmProfile resolve_profile(const RunConfig& config);

void cmd_synth(const RunConfig& config);
void cmd_ingest_check(const RunConfig& config, std::ostream& report);
void cmd_stitch(const RunConfig& config);
void cmd_panel(const RunConfig& config, std::ostream& report);
void cmd_run(const RunConfig& config, std::ostream& report);
void cmd_report(const RunConfig& config, std::ostream& report);

std::uint64_t hash_file(const std::string& path);

}  // namespace statarb
