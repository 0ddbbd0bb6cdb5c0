#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

#include "oracles.hpp"
#include "statarb/gbm.hpp"
#include "statarb/rng.hpp"

using namespace statarb;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

// Owning backing store for a DataView.
struct OwnedData {
    std::vector<std::vector<double>> columns;
    std::vector<ColumnInfo> info;
    std::vector<std::uint8_t> labels;

    DataView view() const {
        DataView v;
        v.n_rows = labels.size();
        for (const auto& c : columns) v.columns.push_back(c.data());
        v.info = info;
        v.labels = labels.data();
        return v;
    }
};

// Numeric-noise panel with the label planted on column 0 (cr-style level).
OwnedData planted_panel(int n, int n_noise, double flip_rate, std::uint64_t seed) {
    OwnedData data;
    Rng rng(seed);
    data.columns.assign(1 + n_noise, {});
    data.info.push_back({"cr_1", 0});
    for (int k = 0; k < n_noise; ++k) data.info.push_back({"x" + std::to_string(k), 0});
    for (int i = 0; i < n; ++i) {
        double signal = 1.0 + 0.05 * rng.normal();
        data.columns[0].push_back(signal);
        for (int k = 0; k < n_noise; ++k) data.columns[1 + k].push_back(rng.normal());
        int label = signal > 1.0 ? 1 : 0;
        if (rng.uniform01() < flip_rate) label = 1 - label;
        data.labels.push_back(static_cast<std::uint8_t>(label));
    }
    return data;
}

std::vector<double> incremental_deviances(const BoostedModel& model, const DataView& view) {
    std::vector<double> scores(view.n_rows, model.f0);
    std::vector<double> deviances;
    deviances.push_back(bernoulli_deviance({view.labels, view.n_rows}, scores));
    for (const auto& tree : model.trees) {
        for (std::size_t i = 0; i < view.n_rows; ++i)
            scores[i] += model.config.shrinkage * tree.predict(view, i);
        deviances.push_back(bernoulli_deviance({view.labels, view.n_rows}, scores));
    }
    return deviances;
}

}  // namespace

TEST_CASE("growing on constant residuals yields a single leaf with that constant") {
    OwnedData data;
    data.columns = {{1.0, 2.0, 3.0, 4.0}};
    data.info = {{"x", 0}};
    data.labels = {0, 0, 1, 1};
    std::vector<double> gradients(4, 0.37);
    std::vector<double> hessians(4, 1.0);
    std::vector<std::uint32_t> rows = {0, 1, 2, 3};
    GbmConfig config;
    config.min_node = 1;
    config.interaction_depth = 3;
    DecisionTree tree = grow_tree(data.view(), gradients, hessians, rows, config);
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].is_leaf());
    CHECK(tree.nodes[0].value == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(tree.nodes[0].n_train == 4);
}

TEST_CASE("perfectly separable residuals are recovered by one split") {
    OwnedData data;
    data.columns = {{0.1, 0.2, 0.3, 0.7, 0.8, 0.9}};
    data.info = {{"x", 0}};
    data.labels = {0, 0, 0, 1, 1, 1};
    std::vector<double> gradients = {-1, -1, -1, 1, 1, 1};
    std::vector<double> hessians(6, 1.0);
    std::vector<std::uint32_t> rows = {0, 1, 2, 3, 4, 5};
    GbmConfig config;
    config.min_node = 1;
    config.interaction_depth = 1;
    DecisionTree tree = grow_tree(data.view(), gradients, hessians, rows, config);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].var == 0);
    CHECK(tree.nodes[0].threshold == doctest::Approx(0.5));
    CHECK(tree.nodes[tree.nodes[0].left].value == doctest::Approx(-1.0));
    CHECK(tree.nodes[tree.nodes[0].right].value == doctest::Approx(1.0));
}

TEST_CASE("depth-1 split choice equals exhaustive threshold search") {
    Rng rng(211);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 50;
        int n_vars = 3;
        OwnedData data;
        std::vector<double> gradients;
        std::vector<double> hessians(n, 1.0);
        data.columns.assign(n_vars, {});
        for (int v = 0; v < n_vars; ++v) data.info.push_back({"x" + std::to_string(v), 0});
        data.labels.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            for (int v = 0; v < n_vars; ++v) data.columns[v].push_back(rng.normal());
            gradients.push_back(rng.normal());
        }
        std::vector<std::uint32_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);

        GbmConfig config;
        config.min_node = 5;
        config.interaction_depth = 1;
        DecisionTree tree = grow_tree(data.view(), gradients, hessians, rows, config);
        auto oracle = test_oracles::exhaustive_best_split(data.columns, gradients, config.min_node);

        CAPTURE(trial);
        if (!oracle.found) {
            CHECK(tree.nodes.size() == 1);
            continue;
        }
        REQUIRE(tree.nodes.size() == 3);
        CHECK(tree.nodes[0].var == oracle.var);
        CHECK(tree.nodes[0].threshold == oracle.threshold);
        CHECK(tree.nodes[0].improvement == doctest::Approx(oracle.improvement).epsilon(1e-9));
    }
}

TEST_CASE("categorical split matches exhaustive subset search") {
    // The mean-ordering reduction is exact for least squares; check the
    // achieved improvement against all 2^(K-1) subsets.
    Rng rng(223);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 60, levels = 6;
        OwnedData data;
        data.columns.assign(1, {});
        data.info = {{"industry", levels}};
        data.labels.assign(n, 0);
        std::vector<double> gradients;
        std::vector<double> hessians(n, 1.0);
        for (int i = 0; i < n; ++i) {
            data.columns[0].push_back(static_cast<double>(rng.below(levels)));
            gradients.push_back(rng.normal());
        }
        std::vector<std::uint32_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        GbmConfig config;
        config.min_node = 1;
        config.interaction_depth = 1;
        DecisionTree tree = grow_tree(data.view(), gradients, hessians, rows, config);

        // exhaustive subsets
        double total = std::accumulate(gradients.begin(), gradients.end(), 0.0);
        double parent = total * total / n;
        double best = 0.0;
        for (int mask = 1; mask < (1 << levels) - 1; ++mask) {
            double left_sum = 0.0;
            int left_n = 0;
            for (int i = 0; i < n; ++i) {
                int code = static_cast<int>(data.columns[0][i]);
                if (mask & (1 << code)) {
                    left_sum += gradients[i];
                    ++left_n;
                }
            }
            if (left_n == 0 || left_n == n) continue;
            double right_sum = total - left_sum;
            double improvement = left_sum * left_sum / left_n +
                                 right_sum * right_sum / (n - left_n) - parent;
            best = std::max(best, improvement);
        }
        CAPTURE(trial);
        if (tree.nodes.size() == 3)
            CHECK(tree.nodes[0].improvement == doctest::Approx(best).epsilon(1e-9));
        else
            CHECK(best <= 0.0);
    }
}

TEST_CASE("f0 is the log-odds of the base rate") {
    OwnedData data = planted_panel(400, 2, 0.5, 227);  // labels ~ coin flips
    size_t positives = 0;
    for (auto y : data.labels) positives += y;
    GbmConfig config;
    config.n_trees = 1;
    config.interaction_depth = 1;
    config.bag_fraction = 1.0;
    config.shrinkage = 0.02;
    BoostedModel model = fit_gbm(data.view(), config);
    double p = static_cast<double>(positives) / data.labels.size();
    CHECK(model.f0 == doctest::Approx(std::log(p / (1 - p))).epsilon(1e-12));
}

TEST_CASE("one noise tree moves predictions at most by the shrinkage bound") {
    OwnedData data = planted_panel(500, 3, 0.5, 229);
    // force an exactly balanced label set
    for (size_t i = 0; i < data.labels.size(); ++i) data.labels[i] = i % 2;
    GbmConfig config;
    config.n_trees = 1;
    config.interaction_depth = 1;
    config.bag_fraction = 1.0;
    config.shrinkage = 0.02;
    BoostedModel model = fit_gbm(data.view(), config);
    CHECK(model.f0 == 0.0);
    auto probas = model.predict_proba(data.view());
    // |score| <= shrinkage * clamp = 0.16, so probabilities stay near 0.5
    for (double p : probas) {
        CHECK(p > 0.5 - 0.047);
        CHECK(p < 0.5 + 0.047);
    }
}

TEST_CASE("training deviance decreases on a planted signal") {
    OwnedData data = planted_panel(1200, 4, 0.15, 233);
    GbmConfig config;
    config.n_trees = 100;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;
    config.bag_fraction = 0.5;
    config.seed = 17;
    BoostedModel model = fit_gbm(data.view(), config);
    auto deviances = incremental_deviances(model, data.view());
    CHECK(deviances.back() < deviances.front());
}

TEST_CASE("full-bag boosting descends monotonically") {
    OwnedData data = planted_panel(600, 3, 0.2, 239);
    GbmConfig config;
    config.n_trees = 120;
    config.shrinkage = 0.1;
    config.interaction_depth = 2;
    config.bag_fraction = 1.0;
    BoostedModel model = fit_gbm(data.view(), config);
    auto deviances = incremental_deviances(model, data.view());
    for (size_t k = 1; k < deviances.size(); ++k)
        CHECK(deviances[k] <= deviances[k - 1] + 1e-9);
}

TEST_CASE("identical seeds give bit-identical serialized models") {
    OwnedData data = planted_panel(800, 3, 0.25, 241);
    GbmConfig config;
    config.n_trees = 30;
    config.shrinkage = 0.05;
    config.interaction_depth = 4;
    config.bag_fraction = 0.5;
    config.seed = 4242;
    BoostedModel a = fit_gbm(data.view(), config);
    BoostedModel b = fit_gbm(data.view(), config);
    CHECK(a.serialize_string() == b.serialize_string());

    config.seed = 4243;
    BoostedModel c = fit_gbm(data.view(), config);
    CHECK(a.serialize_string() != c.serialize_string());
}

TEST_CASE("serialization round-trips exactly") {
    OwnedData data = planted_panel(500, 2, 0.3, 251);
    // include a categorical column
    data.columns.push_back({});
    data.info.push_back({"industry", 5});
    Rng rng(97);
    for (size_t i = 0; i < data.labels.size(); ++i)
        data.columns.back().push_back(static_cast<double>(rng.below(5)));

    GbmConfig config;
    config.n_trees = 25;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;
    config.bag_fraction = 0.7;
    config.seed = 11;
    BoostedModel model = fit_gbm(data.view(), config);

    std::string text = model.serialize_string();
    BoostedModel reloaded = BoostedModel::deserialize_string(text);
    CHECK(reloaded.serialize_string() == text);

    auto before = model.predict_proba(data.view());
    auto after = reloaded.predict_proba(data.view());
    REQUIRE(before.size() == after.size());
    for (size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
}

TEST_CASE("prediction with zero trees is the logistic of f0") {
    BoostedModel model;
    model.f0 = 0.0;
    model.variables = {{"x", 0}};
    CHECK(model.predict_proba(std::vector<double>{1.0}) == doctest::Approx(0.5));

    model.f0 = std::log(0.75 / 0.25);
    CHECK(model.predict_proba(std::vector<double>{1.0}) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("hand-traced single-split tree") {
    BoostedModel model;
    model.f0 = 0.1;
    model.config.shrinkage = 0.5;
    model.variables = {{"x", 0}};
    DecisionTree tree;
    TreeNode root;
    root.var = 0;
    root.threshold = 2.0;
    root.left = 1;
    root.right = 2;
    TreeNode left, right;
    left.value = -1.25;
    left.n_train = 6;
    right.value = 2.5;
    right.n_train = 4;
    tree.nodes = {root, left, right};
    model.trees.push_back(tree);
    model.importance_raw = {0.0};

    // score = f0 + shrinkage * leaf
    double expected_low = 1.0 / (1.0 + std::exp(-(0.1 + 0.5 * -1.25)));
    double expected_high = 1.0 / (1.0 + std::exp(-(0.1 + 0.5 * 2.5)));
    CHECK(model.predict_proba(std::vector<double>{1.5}) ==
          doctest::Approx(expected_low).epsilon(1e-12));
    CHECK(model.predict_proba(std::vector<double>{2.0}) ==
          doctest::Approx(expected_low).epsilon(1e-12));  // boundary goes left
    CHECK(model.predict_proba(std::vector<double>{3.0}) ==
          doctest::Approx(expected_high).epsilon(1e-12));
}

TEST_CASE("unseen categorical levels route to the bigger child") {
    BoostedModel model;
    model.f0 = 0.0;
    model.config.shrinkage = 1.0;
    model.variables = {{"industry", 11}};
    DecisionTree tree;
    TreeNode root;
    root.var = 0;
    root.left_mask = 0b00000011;  // levels 0,1 observed left
    root.right_mask = 0b00001100; // levels 2,3 observed right
    root.left = 1;
    root.right = 2;
    TreeNode left, right;
    left.value = -2.0;
    left.n_train = 10;
    right.value = 2.0;
    right.n_train = 30;
    tree.nodes = {root, left, right};
    model.trees.push_back(tree);
    model.importance_raw = {0.0};

    CHECK(model.predict_proba(std::vector<double>{0.0}) < 0.5);
    CHECK(model.predict_proba(std::vector<double>{3.0}) > 0.5);
    // level 7 was never seen at this node; right child trained on more rows
    CHECK(model.predict_proba(std::vector<double>{7.0}) > 0.5);
}

TEST_CASE("variable importance concentrates on the only splittable variable") {
    OwnedData data = planted_panel(600, 0, 0.1, 257);
    data.columns.push_back(std::vector<double>(600, 1.0));  // constant, unsplittable
    data.info.push_back({"flat", 0});
    GbmConfig config;
    config.n_trees = 20;
    config.shrinkage = 0.1;
    config.interaction_depth = 2;
    config.bag_fraction = 1.0;
    BoostedModel model = fit_gbm(data.view(), config);
    auto importance = model.variable_importance();
    REQUIRE(importance.size() == 2);
    CHECK(importance[0] == doctest::Approx(100.0));
    CHECK(importance[1] == 0.0);
}

TEST_CASE("importance is bounded and conserves total improvement") {
    OwnedData data = planted_panel(700, 5, 0.35, 263);
    GbmConfig config;
    config.n_trees = 40;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;
    config.bag_fraction = 0.5;
    config.seed = 5;
    BoostedModel model = fit_gbm(data.view(), config);

    auto importance = model.variable_importance();
    double peak = 0.0;
    for (double v : importance) {
        CHECK(v >= 0.0);
        CHECK(v <= 100.0);
        peak = std::max(peak, v);
    }
    CHECK(peak == doctest::Approx(100.0));

    double total_improvement = 0.0;
    for (const auto& tree : model.trees)
        for (const auto& node : tree.nodes)
            if (!node.is_leaf()) total_improvement += node.improvement;
    double raw_sum = std::accumulate(model.importance_raw.begin(), model.importance_raw.end(), 0.0);
    CHECK(raw_sum == doctest::Approx(total_improvement).epsilon(1e-9));
}

TEST_CASE("planted signal attains importance rank one") {
    OwnedData data = planted_panel(1500, 6, 0.2, 269);
    GbmConfig config;
    config.n_trees = 60;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;
    config.bag_fraction = 0.5;
    config.seed = 21;
    BoostedModel model = fit_gbm(data.view(), config);
    auto importance = model.variable_importance();
    for (size_t v = 1; v < importance.size(); ++v) CHECK(importance[0] > importance[v]);
    CHECK(importance[0] == doctest::Approx(100.0));
}

TEST_CASE("monotone transforms leave tree structure unchanged") {
    OwnedData data = planted_panel(400, 2, 0.25, 271);
    GbmConfig config;
    config.n_trees = 15;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;
    config.bag_fraction = 0.5;
    config.seed = 33;
    BoostedModel original = fit_gbm(data.view(), config);

    OwnedData transformed = data;
    for (double& x : transformed.columns[0]) x = std::exp(x);  // strictly increasing
    BoostedModel mapped = fit_gbm(transformed.view(), config);

    REQUIRE(original.trees.size() == mapped.trees.size());
    for (size_t t = 0; t < original.trees.size(); ++t) {
        REQUIRE(original.trees[t].nodes.size() == mapped.trees[t].nodes.size());
        for (size_t k = 0; k < original.trees[t].nodes.size(); ++k) {
            const TreeNode& a = original.trees[t].nodes[k];
            const TreeNode& b = mapped.trees[t].nodes[k];
            CHECK(a.var == b.var);
            CHECK(a.n_train == b.n_train);
            CHECK(a.value == b.value);  // identical row partitions
        }
    }
    auto pa = original.predict_proba(data.view());
    auto pb = mapped.predict_proba(transformed.view());
    for (size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
}

TEST_CASE("probabilities stay strictly inside the unit interval") {
    OwnedData data = planted_panel(300, 2, 0.0, 277);  // fully separable
    GbmConfig config;
    config.n_trees = 200;
    config.shrinkage = 0.5;
    config.interaction_depth = 2;
    config.bag_fraction = 1.0;
    config.min_node = 5;
    BoostedModel model = fit_gbm(data.view(), config);
    auto probas = model.predict_proba(data.view());
    for (double p : probas) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        CHECK(std::isfinite(p));
    }
}

TEST_CASE("split-count mode limits the number of splits") {
    OwnedData data = planted_panel(800, 4, 0.2, 281);
    GbmConfig config;
    config.n_trees = 5;
    config.shrinkage = 0.1;
    config.interaction_depth = 3;  // three splits per tree
    config.depth_mode = DepthMode::TotalSplits;
    config.bag_fraction = 1.0;
    BoostedModel model = fit_gbm(data.view(), config);
    for (const auto& tree : model.trees) {
        int splits = 0;
        for (const auto& node : tree.nodes)
            if (!node.is_leaf()) ++splits;
        CHECK(splits <= 3);
    }
}

TEST_CASE("max-depth mode caps every root-to-leaf path") {
    OwnedData data = planted_panel(1000, 4, 0.3, 283);
    GbmConfig config;
    config.n_trees = 5;
    config.shrinkage = 0.1;
    config.interaction_depth = 2;
    config.bag_fraction = 1.0;
    BoostedModel model = fit_gbm(data.view(), config);
    for (const auto& tree : model.trees) {
        // walk depths
        std::function<void(int, int)> walk = [&](int node, int depth) {
            CHECK(depth <= 2);
            if (tree.nodes[node].is_leaf()) return;
            walk(tree.nodes[node].left, depth + 1);
            walk(tree.nodes[node].right, depth + 1);
        };
        walk(0, 0);
    }
}

TEST_CASE("fit rejects degenerate inputs") {
    OwnedData data = planted_panel(50, 1, 0.0, 293);
    for (auto& y : data.labels) y = 1;
    GbmConfig config;
    CHECK(code_of([&] { fit_gbm(data.view(), config); }) == ErrorCode::SingleClassTrainingSet);

    OwnedData empty;
    empty.columns = {{}};
    empty.info = {{"x", 0}};
    CHECK(code_of([&] { fit_gbm(empty.view(), config); }) == ErrorCode::EmptyPanel);

    GbmConfig bad = config;
    bad.shrinkage = 0.0;
    OwnedData ok = planted_panel(50, 1, 0.2, 307);
    CHECK(code_of([&] { fit_gbm(ok.view(), bad); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("prediction views are matched by variable name") {
    OwnedData data = planted_panel(200, 1, 0.2, 311);
    GbmConfig config;
    config.n_trees = 5;
    config.interaction_depth = 2;
    config.shrinkage = 0.1;
    BoostedModel model = fit_gbm(data.view(), config);

    OwnedData missing = data;
    missing.info[0].name = "renamed";
    CHECK(code_of([&] { model.predict_proba(missing.view()); }) == ErrorCode::MissingVariable);

    // reordered columns still work
    OwnedData reordered;
    reordered.columns = {data.columns[1], data.columns[0]};
    reordered.info = {data.info[1], data.info[0]};
    reordered.labels = data.labels;
    auto a = model.predict_proba(data.view());
    auto b = model.predict_proba(reordered.view());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
