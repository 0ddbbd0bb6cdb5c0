// gbm.hpp
// Stochastic gradient boosted classification trees, written from scratch:
// Bernoulli loss, shrinkage, per-iteration row subsampling, depth-limited
// least-squares trees over mixed numeric/categorical predictors, and
// split-improvement variable importance. Fitting is deterministic given
// (data, config, seed); no order-dependent reductions are used.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "statarb/errors.hpp"

namespace statarb {

// How interaction_depth limits a tree: as the maximum split count along any
// root-to-leaf path (the common "max depth" reading), or as the total number
// of splits per tree.
enum class DepthMode { MaxDepth, TotalSplits };

struct GbmConfig {
    int n_trees = 500;
    double shrinkage = 0.02;
    int interaction_depth = 6;
    double bag_fraction = 0.5;
    int min_node = 10;
    std::uint64_t seed = 0;
    DepthMode depth_mode = DepthMode::MaxDepth;
    double col_subsample = 1.0;  // fraction of predictors drawn per tree; 1 = off

    void validate() const;
};

struct ColumnInfo {
    std::string name;
    int levels = 0;  // 0 = numeric, otherwise number of categorical levels

    bool categorical() const { return levels > 0; }
};

// Non-owning column-major training/prediction window. Categorical columns
// hold integer level codes stored as doubles.
struct DataView {
    std::size_t n_rows = 0;
    std::vector<const double*> columns;
    std::vector<ColumnInfo> info;
    const std::uint8_t* labels = nullptr;  // may be null for prediction views
};

struct TreeNode {
    std::int32_t var = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint64_t left_mask = 0;   // categorical: observed levels routed left
    std::uint64_t right_mask = 0;  // categorical: observed levels routed right
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf log-odds increment (pre-shrinkage)
    std::uint32_t n_train = 0;
    double improvement = 0.0;

    bool is_leaf() const { return var < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    // Routes one row to its leaf value. Unseen categorical levels go to the
    // child with more training rows.
    double predict(const DataView& view, std::size_t row) const;
};

struct BoostedModel {
    GbmConfig config;
    double f0 = 0.0;
    std::vector<ColumnInfo> variables;
    std::vector<DecisionTree> trees;
    std::vector<double> importance_raw;  // summed split improvements per variable

    // Raw ensemble score f0 + shrinkage * sum of tree outputs; x is indexed
    // by the model's variable order.
    double predict_score(std::span<const double> x) const;
    double predict_proba(std::span<const double> x) const;

    // Scores a whole view whose columns are matched to the model's variables
    // by name.
    std::vector<double> predict_proba(const DataView& view) const;

    // Importance averaged across trees and rescaled so the maximum is 100.
    std::vector<double> variable_importance() const;

    void serialize(std::ostream& out) const;
    std::string serialize_string() const;
    static BoostedModel deserialize(std::istream& in);
    static BoostedModel deserialize_string(const std::string& text);
};

BoostedModel fit_gbm(const DataView& train, const GbmConfig& config);

// One least-squares tree on the given rows, with Newton leaf estimates
// gamma = sum(gradients)/sum(hessians) clamped to |gamma| <= 8. With unit
// hessians the leaves are plain residual means.
DecisionTree grow_tree(const DataView& data, std::span<const double> gradients,
                       std::span<const double> hessians, std::span<const std::uint32_t> rows,
                       const GbmConfig& config);

// Total Bernoulli deviance 2 * sum(log(1 + exp(f)) - y * f).
double bernoulli_deviance(std::span<const std::uint8_t> labels, std::span<const double> scores);

}  // namespace statarb
