// walkforward.hpp
// Three-year study periods (two training years, one test year, rolled
// annually), rolling 8-fold cross-validation for interaction-depth selection,
// and per-period final fits with full fit accounting.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statarb/features.hpp"
#include "statarb/gbm.hpp"

namespace statarb {

struct StudyPeriod {
    int index = 0;  // 1-based
    Date train_first, train_last;  // two calendar years
    Date test_first, test_last;    // the following year
};

struct CvFold {
    int index = 0;  // 1-based fold number, 1..8
    Date first, last;
    std::uint32_t n_days = 0;
};

struct CvResult {
    int depth = 0;
    std::vector<double> fold_aucs;      // one per evaluated validation fold
    std::vector<int> evaluated_folds;   // validation fold indices (3..8)
    std::vector<int> skipped_folds;     // single-class validation folds
    double mean_auc = 0.0;
};

struct ModelSpec {
    std::string name;
    std::vector<int> vars;  // global predictor ids (see features.hpp)
};

// All non-empty subsets of {CR, SVI, GI} in table order.
std::vector<ModelSpec> model_specs();
const ModelSpec* find_spec(const std::vector<ModelSpec>& specs, const std::string& name);

// Sliding 3-year windows advancing one year over the study range.
std::vector<StudyPeriod> make_periods(Date study_first, Date study_last);

// Eight chronologically coherent folds of the period's training days, equal
// in trading-day count to within one day.
std::vector<CvFold> make_folds(const Panel& panel, Date train_first, Date train_last);

// Non-owning predictor view over a contiguous panel row range.
DataView make_view(const Panel& panel, std::uint32_t row_begin, std::uint32_t row_end,
                   const std::vector<int>& vars);

struct FitRecord {
    int period = 0;
    std::string spec;
    std::string kind;  // "cv" or "final"
    int depth = 0;
    int fold = 0;  // validation fold for cv fits, 0 for final
    Date train_first, train_last;
    Date eval_first, eval_last;
    double auc = 0.0;      // pooled over the evaluation rows
    bool auc_valid = false;
};

struct CvOutcome {
    int selected_depth = 0;
    std::vector<CvResult> results;  // one per candidate depth
};

CvOutcome cross_validate(const Panel& panel, const StudyPeriod& period, const ModelSpec& spec,
                         const std::vector<int>& depth_grid, const GbmConfig& base,
                         std::uint64_t root_seed, std::vector<FitRecord>& fits);

struct PeriodRun {
    int period = 0;
    std::string spec;
    CvOutcome cv;
    BoostedModel model;
    std::vector<std::uint32_t> test_rows;  // row ids into the panel
    std::vector<double> scores;            // predicted outperformance probabilities
};

PeriodRun run_period(const Panel& panel, const StudyPeriod& period, const ModelSpec& spec,
                     const std::vector<int>& depth_grid, const GbmConfig& base,
                     std::uint64_t root_seed, std::vector<FitRecord>& fits);

struct WalkforwardResult {
    std::vector<PeriodRun> runs;  // canonical (period, spec) order
    std::vector<FitRecord> fits;
};

// Runs every (period, spec) pair on a bounded worker pool; outputs are
// reduced in canonical order regardless of scheduling.
WalkforwardResult run_walkforward(const Panel& panel, const std::vector<StudyPeriod>& periods,
                                  const std::vector<ModelSpec>& specs,
                                  const std::vector<int>& depth_grid, const GbmConfig& base,
                                  std::uint64_t root_seed, int n_threads);

// Verifies max(train dates) < min(eval dates) for every emitted fit.
void assert_no_leakage(const std::vector<FitRecord>& fits);

}  // namespace statarb
