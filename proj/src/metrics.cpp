#include "statarb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace statarb {

namespace {

// Sorted copy plus class counts; shared by auc and roc_curve.
struct SortedScores {
    std::vector<ScoredLabel> items;  // ascending by score
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

SortedScores sort_scores(std::span<const ScoredLabel> scored) {
    SortedScores s;
    s.items.assign(scored.begin(), scored.end());
    std::sort(s.items.begin(), s.items.end(),
              [](const ScoredLabel& a, const ScoredLabel& b) { return a.score < b.score; });
    for (const auto& it : s.items) (it.label ? s.positives : s.negatives) += 1;
    if (s.positives == 0 || s.negatives == 0)
        raise(ErrorCode::SingleClass, "AUC needs both classes present");
    return s;
}

double quantile_type7(const std::vector<double>& sorted, double p) {
    double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double auc(std::span<const ScoredLabel> scored) {
    SortedScores s = sort_scores(scored);
    std::uint64_t wins2 = 0;     // 2*(strict wins) + ties, positives vs negatives
    std::uint64_t neg_below = 0;
    size_t i = 0;
    while (i < s.items.size()) {
        size_t j = i;
        std::uint64_t pos_here = 0, neg_here = 0;
        while (j < s.items.size() && s.items[j].score == s.items[i].score) {
            (s.items[j].label ? pos_here : neg_here) += 1;
            ++j;
        }
        wins2 += pos_here * (2 * neg_below + neg_here);
        neg_below += neg_here;
        i = j;
    }
    return static_cast<double>(wins2) /
           (2.0 * static_cast<double>(s.positives) * static_cast<double>(s.negatives));
}

RocCurve roc_curve(std::span<const ScoredLabel> scored) {
    SortedScores s = sort_scores(scored);
    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::uint64_t tp = 0, fp = 0;
    // Sweep thresholds from the highest score down; each distinct score adds
    // its whole tie group.
    size_t i = s.items.size();
    while (i > 0) {
        size_t j = i;
        double value = s.items[i - 1].score;
        while (j > 0 && s.items[j - 1].score == value) {
            (s.items[j - 1].label ? tp : fp) += 1;
            --j;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(s.negatives),
                                  static_cast<double>(tp) / static_cast<double>(s.positives));
        i = j;
    }
    curve.auc = auc(scored);
    return curve;
}

TrendTest ols_trend(std::span<const double> y) {
    TrendTest t;
    t.n = y.size();
    if (y.size() < 2) return t;
    double n = static_cast<double>(y.size());
    double x_mean = (n - 1.0) / 2.0;
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double dx = static_cast<double>(i) - x_mean;
        sxx += dx * dx;
        sxy += dx * (y[i] - y_mean);
    }
    t.slope = sxy / sxx;
    t.intercept = y_mean - t.slope * x_mean;
    if (y.size() < 3) return t;
    double sse = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double resid = y[i] - (t.intercept + t.slope * static_cast<double>(i));
        sse += resid * resid;
    }
    double se = std::sqrt(sse / (n - 2.0) / sxx);
    t.t_stat = se == 0.0 ? 0.0 : t.slope / se;
    return t;
}

double DailyAucSeries::mean() const {
    if (aucs.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [date, v] : aucs) sum += v;
    return sum / static_cast<double>(aucs.size());
}

DailyAucSeries daily_auc_series(const std::vector<DayScores>& days) {
    DailyAucSeries out;
    for (const auto& day : days) {
        bool has_pos = false, has_neg = false;
        for (const auto& s : day.scored) (s.label ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) {
            ++out.skipped_days;
            continue;
        }
        out.aucs.emplace_back(day.date, auc(day.scored));
    }
    std::vector<double> values;
    values.reserve(out.aucs.size());
    for (const auto& [date, v] : out.aucs) values.push_back(v);
    out.trend = ols_trend(values);
    return out;
}

ReturnStats return_stats(std::span<const double> returns, bool excess_kurtosis) {
    if (returns.size() < 2)
        raise(ErrorCode::TooFewObservations, "return statistics need at least 2 observations");
    double n = static_cast<double>(returns.size());

    ReturnStats st;
    st.excess_kurtosis = excess_kurtosis;

    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();
    st.q1 = quantile_type7(sorted, 0.25);
    st.median = quantile_type7(sorted, 0.50);
    st.q3 = quantile_type7(sorted, 0.75);

    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= n;
    st.arithmetic_mean = mean;

    double log_sum = 0.0;
    for (double r : returns) {
        if (r <= -1.0)
            raise(ErrorCode::GeometricUndefined, "geometric mean undefined for returns <= -1");
        log_sum += std::log1p(r);
    }
    st.geometric_mean = std::expm1(log_sum / n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0, ss = 0.0;
    for (double r : returns) {
        double d = r - mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        ss += d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    st.variance = ss / (n - 1.0);
    st.stdev = std::sqrt(st.variance);
    st.se_mean = st.stdev / std::sqrt(n);
    st.lcl95 = mean - 1.96 * st.se_mean;
    st.ucl95 = mean + 1.96 * st.se_mean;

    if (m2 == 0.0)
        raise(ErrorCode::DegenerateMoments, "higher moments undefined for a constant series");
    st.skewness = m3 / std::pow(m2, 1.5);
    st.kurtosis = m4 / (m2 * m2) - (excess_kurtosis ? 3.0 : 0.0);
    return st;
}

double t_test_zero(std::span<const double> series) {
    if (series.size() < 2)
        raise(ErrorCode::TooFewObservations, "t test needs at least 2 observations");
    double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : series) ss += (v - mean) * (v - mean);
    double stdev = std::sqrt(ss / (n - 1.0));
    if (stdev == 0.0) {
        if (mean == 0.0) return 0.0;
        return mean > 0.0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    }
    return mean / (stdev / std::sqrt(n));
}

double t_test_paired_vs_index(const std::vector<std::pair<Date, double>>& strategy,
                              const std::vector<std::pair<Date, double>>& index) {
    if (strategy.size() != index.size())
        raise(ErrorCode::DateMismatch, "paired test needs equally dated series");
    std::vector<double> diff;
    diff.reserve(strategy.size());
    for (size_t i = 0; i < strategy.size(); ++i) {
        if (strategy[i].first != index[i].first)
            raise(ErrorCode::DateMismatch, "paired test date mismatch at " +
                                               strategy[i].first.to_string() + " vs " +
                                               index[i].first.to_string());
        diff.push_back(strategy[i].second - index[i].second);
    }
    return t_test_zero(diff);
}

}  // namespace statarb
