#include "statarb/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "statarb/rng.hpp"

namespace statarb {

namespace {

constexpr double kMaxLeafValue = 8.0;
constexpr int kMaxCategoricalLevels = 64;  // level subsets are stored as bit masks

double sigmoid(double f) { return 1.0 / (1.0 + std::exp(-f)); }

// One-step Newton estimate for the Bernoulli loss, clamped against infinite
// log-odds on (nearly) pure nodes.
double newton_value(double g_sum, double h_sum) {
    if (h_sum <= 0.0) return g_sum == 0.0 ? 0.0 : (g_sum > 0.0 ? kMaxLeafValue : -kMaxLeafValue);
    double v = g_sum / h_sum;
    return std::clamp(v, -kMaxLeafValue, kMaxLeafValue);
}

std::string format_hex(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

struct Split {
    double improvement = 0.0;
    std::int32_t var = -1;
    double threshold = 0.0;
    std::uint64_t left_mask = 0;
    std::uint64_t right_mask = 0;

    bool valid() const { return var >= 0; }
};

struct NodeWork {
    std::int32_t node_id = 0;
    int depth = 0;
    std::uint32_t count = 0;
    double g_sum = 0.0;
    double h_sum = 0.0;
    std::vector<std::vector<std::uint32_t>> sorted;  // per variable, rows ordered by value
    Split best;
};

class TreeBuilder {
public:
    TreeBuilder(const DataView& data, const double* gradients, const double* hessians,
                const GbmConfig& config, const std::vector<std::uint8_t>* active_vars)
        : data_(data), g_(gradients), h_(hessians), config_(config), active_vars_(active_vars) {}

    DecisionTree build(std::vector<std::vector<std::uint32_t>> root_sorted);

private:
    Split find_best(const NodeWork& work) const;
    NodeWork make_child(std::int32_t node_id, int depth,
                        std::vector<std::vector<std::uint32_t>> sorted) const;

    bool var_active(std::size_t v) const { return !active_vars_ || (*active_vars_)[v]; }

    const DataView& data_;
    const double* g_;
    const double* h_;
    const GbmConfig& config_;
    const std::vector<std::uint8_t>* active_vars_;
};

Split TreeBuilder::find_best(const NodeWork& work) const {
    Split best;
    double n_total = static_cast<double>(work.count);
    double g_total = work.g_sum;
    double parent_score = g_total * g_total / n_total;
    std::uint32_t min_node = static_cast<std::uint32_t>(config_.min_node);

    for (std::size_t v = 0; v < data_.columns.size(); ++v) {
        if (!var_active(v)) continue;
        const double* x = data_.columns[v];
        const auto& rows = work.sorted[v];

        if (!data_.info[v].categorical()) {
            double g_left = 0.0;
            for (std::uint32_t i = 0; i + 1 < rows.size(); ++i) {
                g_left += g_[rows[i]];
                double a = x[rows[i]];
                double b = x[rows[i + 1]];
                if (a == b) continue;
                std::uint32_t n_left = i + 1;
                std::uint32_t n_right = work.count - n_left;
                if (n_left < min_node || n_right < min_node) continue;
                double g_right = g_total - g_left;
                double improvement = g_left * g_left / n_left + g_right * g_right / n_right -
                                     parent_score;
                if (improvement > best.improvement) {
                    double threshold = a + 0.5 * (b - a);
                    if (threshold >= b) threshold = a;  // adjacent doubles
                    best.improvement = improvement;
                    best.var = static_cast<std::int32_t>(v);
                    best.threshold = threshold;
                    best.left_mask = best.right_mask = 0;
                }
            }
        } else {
            int levels = data_.info[v].levels;
            double level_g[kMaxCategoricalLevels];
            std::uint32_t level_n[kMaxCategoricalLevels];
            std::fill(level_g, level_g + levels, 0.0);
            std::fill(level_n, level_n + levels, 0u);
            for (std::uint32_t row : rows) {
                int code = static_cast<int>(x[row]);
                level_g[code] += g_[row];
                level_n[code] += 1;
            }
            // Exact binary-response reduction: order levels by mean residual
            // and scan the ordering as if it were numeric.
            int order[kMaxCategoricalLevels];
            int n_observed = 0;
            for (int c = 0; c < levels; ++c)
                if (level_n[c] > 0) order[n_observed++] = c;
            std::sort(order, order + n_observed, [&](int a, int b) {
                double ma = level_g[a] / level_n[a];
                double mb = level_g[b] / level_n[b];
                if (ma != mb) return ma < mb;
                return a < b;
            });
            std::uint64_t observed_mask = 0;
            for (int k = 0; k < n_observed; ++k) observed_mask |= 1ULL << order[k];

            double g_left = 0.0;
            std::uint32_t n_left = 0;
            std::uint64_t mask_left = 0;
            for (int k = 0; k + 1 < n_observed; ++k) {
                g_left += level_g[order[k]];
                n_left += level_n[order[k]];
                mask_left |= 1ULL << order[k];
                std::uint32_t n_right = work.count - n_left;
                if (n_left < min_node || n_right < min_node) continue;
                double g_right = g_total - g_left;
                double improvement = g_left * g_left / n_left + g_right * g_right / n_right -
                                     parent_score;
                if (improvement > best.improvement) {
                    best.improvement = improvement;
                    best.var = static_cast<std::int32_t>(v);
                    best.threshold = 0.0;
                    best.left_mask = mask_left;
                    best.right_mask = observed_mask & ~mask_left;
                }
            }
        }
    }
    return best;
}

NodeWork TreeBuilder::make_child(std::int32_t node_id, int depth,
                                 std::vector<std::vector<std::uint32_t>> sorted) const {
    NodeWork work;
    work.node_id = node_id;
    work.depth = depth;
    work.sorted = std::move(sorted);
    work.count = static_cast<std::uint32_t>(work.sorted[0].size());
    for (std::uint32_t row : work.sorted[0]) {
        work.g_sum += g_[row];
        work.h_sum += h_[row];
    }
    return work;
}

DecisionTree TreeBuilder::build(std::vector<std::vector<std::uint32_t>> root_sorted) {
    DecisionTree tree;

    NodeWork root = make_child(0, 0, std::move(root_sorted));
    TreeNode root_node;
    root_node.value = newton_value(root.g_sum, root.h_sum);
    root_node.n_train = root.count;
    tree.nodes.push_back(root_node);

    // Frontier ordered by split improvement; in MaxDepth mode every eligible
    // node is split eventually, in TotalSplits mode the best ones win.
    std::vector<NodeWork> arena;
    struct HeapEntry {
        double improvement;
        std::int64_t seq;  // lower sequence wins ties
        std::size_t arena_index;
        bool operator<(const HeapEntry& other) const {
            if (improvement != other.improvement) return improvement < other.improvement;
            return seq > other.seq;
        }
    };
    std::vector<HeapEntry> heap;
    std::int64_t next_seq = 0;

    auto consider = [&](NodeWork&& work) {
        bool depth_ok = config_.depth_mode == DepthMode::TotalSplits ||
                        work.depth < config_.interaction_depth;
        if (!depth_ok || work.count < 2 * static_cast<std::uint32_t>(config_.min_node)) return;
        work.best = find_best(work);
        if (!work.best.valid()) return;
        arena.push_back(std::move(work));
        heap.push_back({arena.back().best.improvement, next_seq++, arena.size() - 1});
        std::push_heap(heap.begin(), heap.end());
    };

    consider(std::move(root));

    int splits_done = 0;
    while (!heap.empty()) {
        if (config_.depth_mode == DepthMode::TotalSplits && splits_done >= config_.interaction_depth)
            break;
        std::pop_heap(heap.begin(), heap.end());
        NodeWork work = std::move(arena[heap.back().arena_index]);
        heap.pop_back();

        const Split& split = work.best;
        std::size_t n_vars = data_.columns.size();
        const double* sx = data_.columns[split.var];
        bool categorical = data_.info[split.var].categorical();
        auto goes_left = [&](std::uint32_t row) -> bool {
            if (categorical) return (split.left_mask >> static_cast<int>(sx[row])) & 1ULL;
            return sx[row] <= split.threshold;
        };

        std::vector<std::vector<std::uint32_t>> left_sorted(n_vars), right_sorted(n_vars);
        for (std::size_t v = 0; v < n_vars; ++v) {
            left_sorted[v].reserve(work.count / 2);
            right_sorted[v].reserve(work.count / 2);
            for (std::uint32_t row : work.sorted[v])
                (goes_left(row) ? left_sorted[v] : right_sorted[v]).push_back(row);
        }

        std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        std::int32_t right_id = left_id + 1;
        NodeWork left = make_child(left_id, work.depth + 1, std::move(left_sorted));
        NodeWork right = make_child(right_id, work.depth + 1, std::move(right_sorted));

        TreeNode& parent = tree.nodes[work.node_id];
        parent.var = split.var;
        parent.threshold = split.threshold;
        parent.left_mask = split.left_mask;
        parent.right_mask = split.right_mask;
        parent.left = left_id;
        parent.right = right_id;
        parent.improvement = split.improvement;

        TreeNode left_node, right_node;
        left_node.value = newton_value(left.g_sum, left.h_sum);
        left_node.n_train = left.count;
        right_node.value = newton_value(right.g_sum, right.h_sum);
        right_node.n_train = right.count;
        tree.nodes.push_back(left_node);
        tree.nodes.push_back(right_node);

        ++splits_done;
        consider(std::move(left));
        consider(std::move(right));
    }
    return tree;
}

void check_view(const DataView& view) {
    if (view.columns.size() != view.info.size())
        raise(ErrorCode::InternalError, "data view columns/info size mismatch");
    for (const auto& info : view.info)
        if (info.levels > kMaxCategoricalLevels)
            raise(ErrorCode::InvalidConfig,
                  "categorical predictor " + info.name + " exceeds 64 levels");
}

}  // namespace

void GbmConfig::validate() const {
    if (n_trees < 1) raise(ErrorCode::InvalidConfig, "n_trees must be positive");
    if (!(shrinkage > 0.0 && shrinkage <= 1.0))
        raise(ErrorCode::InvalidConfig, "shrinkage must be in (0, 1]");
    if (interaction_depth < 1) raise(ErrorCode::InvalidConfig, "interaction_depth must be positive");
    if (!(bag_fraction > 0.0 && bag_fraction <= 1.0))
        raise(ErrorCode::InvalidConfig, "bag_fraction must be in (0, 1]");
    if (min_node < 1) raise(ErrorCode::InvalidConfig, "min_node must be positive");
    if (!(col_subsample > 0.0 && col_subsample <= 1.0))
        raise(ErrorCode::InvalidConfig, "col_subsample must be in (0, 1]");
}

double DecisionTree::predict(const DataView& view, std::size_t row) const {
    const TreeNode* node = &nodes[0];
    while (!node->is_leaf()) {
        const double x = view.columns[node->var][row];
        if (view.info[node->var].categorical()) {
            std::uint64_t bit = 1ULL << static_cast<int>(x);
            if (node->left_mask & bit) {
                node = &nodes[node->left];
            } else if (node->right_mask & bit) {
                node = &nodes[node->right];
            } else {
                // Level unseen at this node during training.
                const TreeNode& l = nodes[node->left];
                const TreeNode& r = nodes[node->right];
                node = l.n_train >= r.n_train ? &l : &r;
            }
        } else {
            node = &nodes[x <= node->threshold ? node->left : node->right];
        }
    }
    return node->value;
}

namespace {

double tree_predict_x(const DecisionTree& tree, const std::vector<ColumnInfo>& info,
                      std::span<const double> x) {
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
        double value = x[node->var];
        if (info[node->var].categorical()) {
            std::uint64_t bit = 1ULL << static_cast<int>(value);
            if (node->left_mask & bit) {
                node = &tree.nodes[node->left];
            } else if (node->right_mask & bit) {
                node = &tree.nodes[node->right];
            } else {
                const TreeNode& l = tree.nodes[node->left];
                const TreeNode& r = tree.nodes[node->right];
                node = l.n_train >= r.n_train ? &l : &r;
            }
        } else {
            node = &tree.nodes[value <= node->threshold ? node->left : node->right];
        }
    }
    return node->value;
}

}  // namespace

double BoostedModel::predict_score(std::span<const double> x) const {
    if (x.size() != variables.size())
        raise(ErrorCode::MissingVariable, "expected " + std::to_string(variables.size()) +
                                              " predictor values, got " + std::to_string(x.size()));
    double f = f0;
    for (const auto& tree : trees) f += config.shrinkage * tree_predict_x(tree, variables, x);
    return f;
}

double BoostedModel::predict_proba(std::span<const double> x) const {
    return sigmoid(predict_score(x));
}

std::vector<double> BoostedModel::predict_proba(const DataView& view) const {
    check_view(view);
    std::vector<std::size_t> map(variables.size());
    for (std::size_t v = 0; v < variables.size(); ++v) {
        bool found = false;
        for (std::size_t c = 0; c < view.info.size(); ++c) {
            if (view.info[c].name == variables[v].name) {
                if (view.info[c].levels != variables[v].levels)
                    raise(ErrorCode::MissingVariable,
                          "predictor " + variables[v].name + " has mismatched levels");
                map[v] = c;
                found = true;
                break;
            }
        }
        if (!found)
            raise(ErrorCode::MissingVariable, "predictor " + variables[v].name + " not in view");
    }
    std::vector<double> out(view.n_rows);
    std::vector<double> x(variables.size());
    for (std::size_t i = 0; i < view.n_rows; ++i) {
        for (std::size_t v = 0; v < variables.size(); ++v) x[v] = view.columns[map[v]][i];
        double f = f0;
        for (const auto& tree : trees) f += config.shrinkage * tree_predict_x(tree, variables, x);
        out[i] = sigmoid(f);
    }
    return out;
}

std::vector<double> BoostedModel::variable_importance() const {
    std::vector<double> imp(importance_raw);
    if (!trees.empty())
        for (double& v : imp) v /= static_cast<double>(trees.size());
    double max_value = 0.0;
    for (double v : imp) max_value = std::max(max_value, v);
    if (max_value > 0.0)
        for (double& v : imp) v *= 100.0 / max_value;
    return imp;
}

BoostedModel fit_gbm(const DataView& train, const GbmConfig& config) {
    config.validate();
    check_view(train);
    if (train.n_rows == 0) raise(ErrorCode::EmptyPanel, "cannot fit on an empty panel");
    if (!train.labels) raise(ErrorCode::InvalidConfig, "training view has no labels");
    if (train.columns.empty()) raise(ErrorCode::InvalidConfig, "training view has no predictors");

    std::size_t n = train.n_rows;
    std::size_t n_vars = train.columns.size();

    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) positives += train.labels[i];
    if (positives == 0 || positives == n)
        raise(ErrorCode::SingleClassTrainingSet, "training labels are single-class");

    BoostedModel model;
    model.config = config;
    model.variables = train.info;
    double base_rate = static_cast<double>(positives) / static_cast<double>(n);
    model.f0 = std::log(base_rate / (1.0 - base_rate));

    // Presort once per fit; ties broken by row index so every downstream
    // reduction has a fixed order.
    std::vector<std::vector<std::uint32_t>> presorted(n_vars);
    for (std::size_t v = 0; v < n_vars; ++v) {
        auto& idx = presorted[v];
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
        const double* x = train.columns[v];
        std::sort(idx.begin(), idx.end(), [x](std::uint32_t a, std::uint32_t b) {
            if (x[a] != x[b]) return x[a] < x[b];
            return a < b;
        });
    }

    std::vector<double> scores(n, model.f0);
    std::vector<double> gradients(n, 0.0);
    std::vector<double> hessians(n, 0.0);
    std::vector<std::uint8_t> bag(n, 1);
    std::vector<std::uint8_t> active_vars;
    Rng rng(config.seed);

    std::size_t bag_size = static_cast<std::size_t>(config.bag_fraction * static_cast<double>(n));
    bag_size = std::clamp<std::size_t>(bag_size, 1, n);

    std::size_t active_count = n_vars;
    if (config.col_subsample < 1.0) {
        active_count = static_cast<std::size_t>(config.col_subsample * static_cast<double>(n_vars));
        active_count = std::clamp<std::size_t>(active_count, 1, n_vars);
    }

    model.trees.reserve(config.n_trees);
    for (int m = 0; m < config.n_trees; ++m) {
        if (bag_size < n) rng.sample_mask(n, bag_size, bag);
        if (active_count < n_vars) rng.sample_mask(n_vars, active_count, active_vars);

        for (std::size_t i = 0; i < n; ++i) {
            if (!bag[i]) continue;
            double p = sigmoid(scores[i]);
            gradients[i] = static_cast<double>(train.labels[i]) - p;
            hessians[i] = p * (1.0 - p);
        }

        std::vector<std::vector<std::uint32_t>> root_sorted(n_vars);
        for (std::size_t v = 0; v < n_vars; ++v) {
            root_sorted[v].reserve(bag_size);
            for (std::uint32_t row : presorted[v])
                if (bag[row]) root_sorted[v].push_back(row);
        }

        TreeBuilder builder(train, gradients.data(), hessians.data(), config,
                            active_count < n_vars ? &active_vars : nullptr);
        model.trees.push_back(builder.build(std::move(root_sorted)));

        const DecisionTree& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i)
            scores[i] += config.shrinkage * tree.predict(train, i);
    }

    model.importance_raw.assign(n_vars, 0.0);
    for (const auto& tree : model.trees)
        for (const auto& node : tree.nodes)
            if (!node.is_leaf()) model.importance_raw[node.var] += node.improvement;
    return model;
}

DecisionTree grow_tree(const DataView& data, std::span<const double> gradients,
                       std::span<const double> hessians, std::span<const std::uint32_t> rows,
                       const GbmConfig& config) {
    config.validate();
    check_view(data);
    if (rows.empty()) raise(ErrorCode::EmptyPanel, "cannot grow a tree on zero rows");

    std::vector<std::vector<std::uint32_t>> sorted(data.columns.size());
    for (std::size_t v = 0; v < data.columns.size(); ++v) {
        auto& idx = sorted[v];
        idx.assign(rows.begin(), rows.end());
        const double* x = data.columns[v];
        std::sort(idx.begin(), idx.end(), [x](std::uint32_t a, std::uint32_t b) {
            if (x[a] != x[b]) return x[a] < x[b];
            return a < b;
        });
    }
    TreeBuilder builder(data, gradients.data(), hessians.data(), config, nullptr);
    return builder.build(std::move(sorted));
}

double bernoulli_deviance(std::span<const std::uint8_t> labels, std::span<const double> scores) {
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double f = scores[i];
        // log(1 + exp(f)) without overflow
        double log1pexp = std::max(f, 0.0) + std::log1p(std::exp(-std::fabs(f)));
        total += log1pexp - static_cast<double>(labels[i]) * f;
    }
    return 2.0 * total;
}

void BoostedModel::serialize(std::ostream& out) const {
    out << "statarb-gbm 1\n";
    out << "config " << config.n_trees << ' ' << format_hex(config.shrinkage) << ' '
        << config.interaction_depth << ' ' << format_hex(config.bag_fraction) << ' '
        << config.min_node << ' ' << config.seed << ' '
        << (config.depth_mode == DepthMode::MaxDepth ? "depth" : "splits") << ' '
        << format_hex(config.col_subsample) << '\n';
    out << "f0 " << format_hex(f0) << '\n';
    out << "vars " << variables.size() << '\n';
    for (const auto& v : variables) out << "var " << v.name << ' ' << v.levels << '\n';
    out << "importance";
    for (double v : importance_raw) out << ' ' << format_hex(v);
    out << '\n';
    out << "trees " << trees.size() << '\n';
    for (std::size_t t = 0; t < trees.size(); ++t) {
        out << "tree " << t << ' ' << trees[t].nodes.size() << '\n';
        for (const auto& node : trees[t].nodes) {
            out << "n " << node.var << ' ' << format_hex(node.threshold) << ' ' << node.left_mask
                << ' ' << node.right_mask << ' ' << node.left << ' ' << node.right << ' '
                << format_hex(node.value) << ' ' << node.n_train << ' '
                << format_hex(node.improvement) << '\n';
        }
    }
    out << "end\n";
}

std::string BoostedModel::serialize_string() const {
    std::ostringstream out;
    serialize(out);
    return out.str();
}

namespace {

[[noreturn]] void bad_model(const std::string& detail) {
    raise(ErrorCode::MalformedRow, "malformed model file: " + detail);
}

std::string expect_token(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) bad_model(std::string("missing ") + what);
    return token;
}

double read_hex(std::istream& in, const char* what) {
    std::string token = expect_token(in, what);
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) bad_model(std::string("bad number for ") + what);
    return v;
}

long long read_int(std::istream& in, const char* what) {
    std::string token = expect_token(in, what);
    char* end = nullptr;
    long long v = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size()) bad_model(std::string("bad integer for ") + what);
    return v;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
    std::string token = expect_token(in, what);
    char* end = nullptr;
    std::uint64_t v = std::strtoull(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size()) bad_model(std::string("bad integer for ") + what);
    return v;
}

void expect_keyword(std::istream& in, const char* keyword) {
    std::string token = expect_token(in, keyword);
    if (token != keyword) bad_model("expected \"" + std::string(keyword) + "\", got \"" + token + "\"");
}

}  // namespace

BoostedModel BoostedModel::deserialize(std::istream& in) {
    expect_keyword(in, "statarb-gbm");
    if (read_int(in, "version") != 1) bad_model("unsupported version");

    BoostedModel model;
    expect_keyword(in, "config");
    model.config.n_trees = static_cast<int>(read_int(in, "n_trees"));
    model.config.shrinkage = read_hex(in, "shrinkage");
    model.config.interaction_depth = static_cast<int>(read_int(in, "interaction_depth"));
    model.config.bag_fraction = read_hex(in, "bag_fraction");
    model.config.min_node = static_cast<int>(read_int(in, "min_node"));
    model.config.seed = read_u64(in, "seed");
    std::string mode = expect_token(in, "depth_mode");
    if (mode == "depth") {
        model.config.depth_mode = DepthMode::MaxDepth;
    } else if (mode == "splits") {
        model.config.depth_mode = DepthMode::TotalSplits;
    } else {
        bad_model("unknown depth mode " + mode);
    }
    model.config.col_subsample = read_hex(in, "col_subsample");

    expect_keyword(in, "f0");
    model.f0 = read_hex(in, "f0");

    expect_keyword(in, "vars");
    long long n_vars = read_int(in, "var count");
    if (n_vars < 1) bad_model("no variables");
    for (long long v = 0; v < n_vars; ++v) {
        expect_keyword(in, "var");
        ColumnInfo info;
        info.name = expect_token(in, "var name");
        info.levels = static_cast<int>(read_int(in, "var levels"));
        model.variables.push_back(std::move(info));
    }

    expect_keyword(in, "importance");
    for (long long v = 0; v < n_vars; ++v)
        model.importance_raw.push_back(read_hex(in, "importance"));

    expect_keyword(in, "trees");
    long long n_trees = read_int(in, "tree count");
    for (long long t = 0; t < n_trees; ++t) {
        expect_keyword(in, "tree");
        if (read_int(in, "tree id") != t) bad_model("tree ids out of order");
        long long n_nodes = read_int(in, "node count");
        DecisionTree tree;
        for (long long k = 0; k < n_nodes; ++k) {
            expect_keyword(in, "n");
            TreeNode node;
            node.var = static_cast<std::int32_t>(read_int(in, "node var"));
            node.threshold = read_hex(in, "threshold");
            node.left_mask = read_u64(in, "left mask");
            node.right_mask = read_u64(in, "right mask");
            node.left = static_cast<std::int32_t>(read_int(in, "left child"));
            node.right = static_cast<std::int32_t>(read_int(in, "right child"));
            node.value = read_hex(in, "value");
            node.n_train = static_cast<std::uint32_t>(read_u64(in, "n_train"));
            node.improvement = read_hex(in, "improvement");
            if (node.var >= static_cast<std::int32_t>(n_vars)) bad_model("node var out of range");
            tree.nodes.push_back(node);
        }
        for (const auto& node : tree.nodes)
            if (!node.is_leaf() &&
                (node.left < 0 || node.right < 0 ||
                 node.left >= static_cast<std::int32_t>(tree.nodes.size()) ||
                 node.right >= static_cast<std::int32_t>(tree.nodes.size())))
                bad_model("node child out of range");
        model.trees.push_back(std::move(tree));
    }
    expect_keyword(in, "end");
    return model;
}

BoostedModel BoostedModel::deserialize_string(const std::string& text) {
    std::istringstream in(text);
    return deserialize(in);
}

}  // namespace statarb
