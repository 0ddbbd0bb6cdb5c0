#include "statarb/walkforward.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "statarb/metrics.hpp"
#include "statarb/rng.hpp"

namespace statarb {

namespace {

std::vector<int> spec_vars(bool cr, bool svi, bool gi) {
    std::vector<int> vars;
    if (cr)
        for (int v = 0; v < kNumCrLags; ++v) vars.push_back(v);
    if (svi)
        for (int v = 0; v < kNumSviLags; ++v) vars.push_back(kNumCrLags + v);
    if (gi) {
        vars.push_back(kVarWeekday);
        vars.push_back(kVarIndustry);
        vars.push_back(kVarDvol);
    }
    return vars;
}

}  // namespace

std::vector<ModelSpec> model_specs() {
    return {
        {"CR", spec_vars(true, false, false)},
        {"SVI", spec_vars(false, true, false)},
        {"GI", spec_vars(false, false, true)},
        {"CR_SVI", spec_vars(true, true, false)},
        {"CR_GI", spec_vars(true, false, true)},
        {"SVI_GI", spec_vars(false, true, true)},
        {"CR_SVI_GI", spec_vars(true, true, true)},
    };
}

const ModelSpec* find_spec(const std::vector<ModelSpec>& specs, const std::string& name) {
    for (const auto& s : specs)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<StudyPeriod> make_periods(Date study_first, Date study_last) {
    if (study_last < study_first) raise(ErrorCode::RangeTooShort, "empty study range");
    int first_year = study_first.year();
    int last_year = study_last.year();
    int n_periods = last_year - first_year - 1;
    if (n_periods < 1)
        raise(ErrorCode::RangeTooShort, "study range must span at least 3 calendar years");

    std::vector<StudyPeriod> periods;
    periods.reserve(n_periods);
    for (int i = 0; i < n_periods; ++i) {
        int y = first_year + i;
        StudyPeriod p;
        p.index = i + 1;
        p.train_first = std::max(study_first, Date(y, 1, 1));
        p.train_last = Date(y + 1, 12, 31);
        p.test_first = Date(y + 2, 1, 1);
        p.test_last = std::min(study_last, Date(y + 2, 12, 31));
        periods.push_back(p);
    }
    return periods;
}

std::vector<CvFold> make_folds(const Panel& panel, Date train_first, Date train_last) {
    auto [day_begin, day_end] = panel.day_range(train_first, train_last);
    std::uint32_t n_days = day_end - day_begin;
    if (n_days < 8)
        raise(ErrorCode::RangeTooShort,
              "training range has only " + std::to_string(n_days) + " trading days; need >= 8");

    std::vector<CvFold> folds;
    folds.reserve(8);
    std::uint32_t base = n_days / 8;
    std::uint32_t remainder = n_days % 8;
    std::uint32_t cursor = day_begin;
    for (int k = 0; k < 8; ++k) {
        std::uint32_t size = base + (static_cast<std::uint32_t>(k) < remainder ? 1 : 0);
        CvFold fold;
        fold.index = k + 1;
        fold.n_days = size;
        fold.first = panel.days[cursor];
        fold.last = panel.days[cursor + size - 1];
        folds.push_back(fold);
        cursor += size;
    }
    return folds;
}

DataView make_view(const Panel& panel, std::uint32_t row_begin, std::uint32_t row_end,
                   const std::vector<int>& vars) {
    if (vars.empty()) raise(ErrorCode::InvalidConfig, "empty predictor subset is excluded");
    DataView view;
    view.n_rows = row_end - row_begin;
    view.columns.reserve(vars.size());
    view.info.reserve(vars.size());
    for (int v : vars) {
        view.columns.push_back(panel.columns[v].data() + row_begin);
        view.info.push_back({predictor_name(v), predictor_levels(v)});
    }
    view.labels = panel.labels.data() + row_begin;
    return view;
}

namespace {

std::uint64_t fit_seed(std::uint64_t root_seed, int period, const std::string& spec, int depth,
                       int fold) {
    std::string name = "gbm/p" + std::to_string(period) + "/" + spec + "/d" +
                       std::to_string(depth) + "/f" + std::to_string(fold);
    return derive_seed(root_seed, name);
}

// Pooled AUC of a fitted model over a row range; false when the range has a
// single class only.
bool pooled_auc(const Panel& panel, const BoostedModel& model, const std::vector<int>& vars,
                std::uint32_t row_begin, std::uint32_t row_end, double& out) {
    bool has_pos = false, has_neg = false;
    for (std::uint32_t i = row_begin; i < row_end; ++i)
        (panel.labels[i] ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) return false;

    DataView view = make_view(panel, row_begin, row_end, vars);
    std::vector<double> scores = model.predict_proba(view);
    std::vector<ScoredLabel> scored(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        scored[i] = {scores[i], panel.labels[row_begin + i]};
    out = auc(scored);
    return true;
}

}  // namespace

CvOutcome cross_validate(const Panel& panel, const StudyPeriod& period, const ModelSpec& spec,
                         const std::vector<int>& depth_grid, const GbmConfig& base,
                         std::uint64_t root_seed, std::vector<FitRecord>& fits) {
    if (depth_grid.empty()) raise(ErrorCode::InvalidConfig, "empty depth grid");
    std::vector<int> grid = depth_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<CvFold> folds = make_folds(panel, period.train_first, period.train_last);

    CvOutcome outcome;
    double best_mean = 0.0;
    bool have_best = false;
    for (int depth : grid) {
        CvResult result;
        result.depth = depth;
        for (int s = 0; s + 2 < 8; ++s) {
            const CvFold& validation = folds[s + 2];
            auto [train_begin, train_end] = panel.row_range(folds[s].first, folds[s + 1].last);
            auto [val_begin, val_end] = panel.row_range(validation.first, validation.last);

            GbmConfig config = base;
            config.interaction_depth = depth;
            config.seed = fit_seed(root_seed, period.index, spec.name, depth, validation.index);

            DataView train = make_view(panel, train_begin, train_end, spec.vars);
            BoostedModel model = fit_gbm(train, config);

            FitRecord record;
            record.period = period.index;
            record.spec = spec.name;
            record.kind = "cv";
            record.depth = depth;
            record.fold = validation.index;
            record.train_first = folds[s].first;
            record.train_last = folds[s + 1].last;
            record.eval_first = validation.first;
            record.eval_last = validation.last;

            double fold_auc = 0.0;
            if (pooled_auc(panel, model, spec.vars, val_begin, val_end, fold_auc)) {
                result.fold_aucs.push_back(fold_auc);
                result.evaluated_folds.push_back(validation.index);
                record.auc = fold_auc;
                record.auc_valid = true;
            } else {
                result.skipped_folds.push_back(validation.index);
            }
            fits.push_back(std::move(record));
        }
        if (!result.fold_aucs.empty()) {
            double sum = 0.0;
            for (double a : result.fold_aucs) sum += a;
            result.mean_auc = sum / static_cast<double>(result.fold_aucs.size());
            if (!have_best || result.mean_auc > best_mean) {
                best_mean = result.mean_auc;
                outcome.selected_depth = depth;
                have_best = true;
            }
        }
        outcome.results.push_back(std::move(result));
    }
    if (!have_best)
        raise(ErrorCode::SingleClass,
              "no depth produced a scorable validation fold for " + spec.name);
    return outcome;
}

PeriodRun run_period(const Panel& panel, const StudyPeriod& period, const ModelSpec& spec,
                     const std::vector<int>& depth_grid, const GbmConfig& base,
                     std::uint64_t root_seed, std::vector<FitRecord>& fits) {
    if (spec.vars.empty()) raise(ErrorCode::InvalidConfig, "empty predictor subset is excluded");

    PeriodRun run;
    run.period = period.index;
    run.spec = spec.name;
    run.cv = cross_validate(panel, period, spec, depth_grid, base, root_seed, fits);

    auto [train_begin, train_end] = panel.row_range(period.train_first, period.train_last);
    GbmConfig config = base;
    config.interaction_depth = run.cv.selected_depth;
    config.seed = fit_seed(root_seed, period.index, spec.name, run.cv.selected_depth, 0);

    DataView train = make_view(panel, train_begin, train_end, spec.vars);
    run.model = fit_gbm(train, config);

    auto [test_begin, test_end] = panel.row_range(period.test_first, period.test_last);
    DataView test = make_view(panel, test_begin, test_end, spec.vars);
    run.scores = run.model.predict_proba(test);
    run.test_rows.resize(test_end - test_begin);
    for (std::uint32_t i = test_begin; i < test_end; ++i) run.test_rows[i - test_begin] = i;

    FitRecord record;
    record.period = period.index;
    record.spec = spec.name;
    record.kind = "final";
    record.depth = run.cv.selected_depth;
    record.train_first = period.train_first;
    record.train_last = period.train_last;
    record.eval_first = period.test_first;
    record.eval_last = period.test_last;
    double test_auc = 0.0;
    if (test_end > test_begin &&
        pooled_auc(panel, run.model, spec.vars, test_begin, test_end, test_auc)) {
        record.auc = test_auc;
        record.auc_valid = true;
    }
    fits.push_back(std::move(record));
    return run;
}

WalkforwardResult run_walkforward(const Panel& panel, const std::vector<StudyPeriod>& periods,
                                  const std::vector<ModelSpec>& specs,
                                  const std::vector<int>& depth_grid, const GbmConfig& base,
                                  std::uint64_t root_seed, int n_threads) {
    struct Task {
        const StudyPeriod* period;
        const ModelSpec* spec;
    };
    std::vector<Task> tasks;
    for (const auto& period : periods)
        for (const auto& spec : specs) tasks.push_back({&period, &spec});

    std::vector<PeriodRun> runs(tasks.size());
    std::vector<std::vector<FitRecord>> fit_lists(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            try {
                runs[t] = run_period(panel, *tasks[t].period, *tasks[t].spec, depth_grid, base,
                                     root_seed, fit_lists[t]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    int pool = std::max(1, n_threads);
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    WalkforwardResult result;
    result.runs = std::move(runs);
    for (auto& list : fit_lists)
        for (auto& record : list) result.fits.push_back(std::move(record));
    return result;
}

void assert_no_leakage(const std::vector<FitRecord>& fits) {
    for (const auto& record : fits)
        if (!(record.train_last < record.eval_first))
            raise(ErrorCode::InternalError,
                  "leaky fit: train through " + record.train_last.to_string() +
                      " evaluated from " + record.eval_first.to_string() + " (" + record.spec +
                      ", period " + std::to_string(record.period) + ")");
}

}  // namespace statarb
