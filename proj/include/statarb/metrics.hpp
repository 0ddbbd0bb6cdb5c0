// metrics.hpp
// ROC/AUC, daily-AUC trend testing, return distribution statistics and the
// hypothesis tests used for strategy evaluation.

#pragma once

#include <span>
#include <vector>

#include "statarb/dates.hpp"
#include "statarb/errors.hpp"

namespace statarb {

struct ScoredLabel {
    double score = 0.0;
    int label = 0;
};

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
};

// Probability that a random positive outscores a random negative, ties 1/2.
// Accumulated in integers so it matches a pairwise count exactly.
double auc(std::span<const ScoredLabel> scored);

RocCurve roc_curve(std::span<const ScoredLabel> scored);

struct TrendTest {
    double slope = 0.0;
    double intercept = 0.0;
    double t_stat = 0.0;
    std::size_t n = 0;
};

// Least-squares slope of y against its 0-based position, with a t test on
// the slope.
TrendTest ols_trend(std::span<const double> y);

struct DayScores {
    Date date;
    std::vector<ScoredLabel> scored;
};

struct DailyAucSeries {
    std::vector<std::pair<Date, double>> aucs;
    std::size_t skipped_days = 0;  // single-class days
    TrendTest trend;

    double mean() const;
};

DailyAucSeries daily_auc_series(const std::vector<DayScores>& days);

struct ReturnStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double arithmetic_mean = 0.0;
    double geometric_mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double se_mean = 0.0;
    double lcl95 = 0.0;
    double ucl95 = 0.0;
    double variance = 0.0;
    double stdev = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    bool excess_kurtosis = true;
};

// Sample moments of a daily return series. Kurtosis is reported as excess by
// default; quartiles interpolate linearly between order statistics.
ReturnStats return_stats(std::span<const double> returns, bool excess_kurtosis = true);

// t statistic for H0 "mean equals zero".
double t_test_zero(std::span<const double> series);

// Paired t statistic on the per-day difference of two date-aligned series.
double t_test_paired_vs_index(const std::vector<std::pair<Date, double>>& strategy,
                              const std::vector<std::pair<Date, double>>& index);

}  // namespace statarb
