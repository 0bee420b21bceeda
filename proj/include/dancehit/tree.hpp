#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/model.hpp"
#include "dancehit/numeric.hpp"

namespace dancehit {

struct C45Params {
    int min_leaf = 2;               // minimal instances per side of a split
    double prune_confidence = 0.25; // pessimistic error confidence
    std::optional<int> max_depth;
    bool prune = true;
};

// Binary decision tree over numeric thresholds; leaves carry the training
// class frequencies they were fitted on.
class DecisionTreeModel final : public TrainedModel {
public:
    struct Node {
        bool is_leaf = true;
        int feature = -1;
        double threshold = 0;
        int left = -1;   // index into nodes(), x <= threshold
        int right = -1;  // x > threshold
        double n_hit = 0;
        double n_nonhit = 0;
    };

    std::string kind() const override { return "c45"; }
    const std::vector<std::string>& feature_names() const override { return feature_names_; }

    double score_hit(std::span<const double> row) const override {
        const Node& leaf = descend(row);
        double total = leaf.n_hit + leaf.n_nonhit;
        return total > 0 ? leaf.n_hit / total : 0.5;
    }

    SongClass classify(std::span<const double> row) const override {
        return score_hit(row) >= 0.5 ? SongClass::Hit : SongClass::NonHit;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

    int depth() const { return depth_of(0); }

    std::size_t leaf_count() const {
        std::size_t c = 0;
        for (const auto& n : nodes_)
            if (n.is_leaf) ++c;
        return c;
    }

    nlohmann::json to_json() const override {
        auto j = detail::model_envelope(kind(), feature_names_);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nodes_)
            arr.push_back(nlohmann::json{{"is_leaf", n.is_leaf},
                                         {"feature", n.feature},
                                         {"threshold", n.threshold},
                                         {"left", n.left},
                                         {"right", n.right},
                                         {"n_hit", n.n_hit},
                                         {"n_nonhit", n.n_nonhit}});
        j["nodes"] = arr;
        return j;
    }

    static DecisionTreeModel from_json(const nlohmann::json& j) {
        detail::check_envelope(j, "c45");
        DecisionTreeModel m;
        m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
        for (const auto& nj : j.at("nodes")) {
            Node n;
            n.is_leaf = nj.at("is_leaf").get<bool>();
            n.feature = nj.at("feature").get<int>();
            n.threshold = nj.at("threshold").get<double>();
            n.left = nj.at("left").get<int>();
            n.right = nj.at("right").get<int>();
            n.n_hit = nj.at("n_hit").get<double>();
            n.n_nonhit = nj.at("n_nonhit").get<double>();
            m.nodes_.push_back(n);
        }
        if (m.nodes_.empty()) throw std::runtime_error("c45: empty node list");
        return m;
    }

    friend DecisionTreeModel c45_fit(const Dataset&, const C45Params&);

private:
    const Node& descend(std::span<const double> row) const {
        check_width(row);
        int cur = 0;
        while (!nodes_[static_cast<std::size_t>(cur)].is_leaf) {
            const Node& n = nodes_[static_cast<std::size_t>(cur)];
            cur = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes_[static_cast<std::size_t>(cur)];
    }

    int depth_of(int id) const {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.is_leaf) return 0;
        return 1 + std::max(depth_of(n.left), depth_of(n.right));
    }

    std::vector<std::string> feature_names_;
    std::vector<Node> nodes_;
};

namespace detail {

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0;
    double n_hit = 0;
    double n_nonhit = 0;
    std::unique_ptr<TreeNode> left, right;
};

inline double entropy2(double a, double b) {
    double n = a + b;
    if (n <= 0) return 0;
    double h = 0;
    for (double c : {a, b}) {
        if (c <= 0) continue;
        double p = c / n;
        h -= p * std::log2(p);
    }
    return h;
}

// Upper-confidence-bound estimate of additional errors for e observed
// errors in n instances (the C4.5 pessimistic correction).
inline double added_errors(double n, double e, double cf) {
    if (n <= 0) return 0;
    if (e < 1) {
        double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (e == 0) return base;
        return base + e * (added_errors(n, 1.0, cf) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    double z = std_normal_quantile(1.0 - cf);
    double f = (e + 0.5) / n;
    double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) /
               (1 + z * z / n);
    return r * n - e;
}

inline double leaf_estimated_errors(double n_hit, double n_nonhit, double cf) {
    double n = n_hit + n_nonhit;
    double e = std::min(n_hit, n_nonhit);
    return e + added_errors(n, e, cf);
}

class C45Builder {
public:
    C45Builder(const Dataset& ds, const C45Params& params) : ds_(ds), params_(params) {}

    std::unique_ptr<TreeNode> build() {
        std::vector<std::size_t> all(ds_.n_rows());
        std::iota(all.begin(), all.end(), 0);
        auto root = grow(all, 0);
        if (params_.prune) prune(*root, all);
        return root;
    }

private:
    std::unique_ptr<TreeNode> grow(const std::vector<std::size_t>& idx, int depth) {
        auto node = std::make_unique<TreeNode>();
        count(idx, node->n_hit, node->n_nonhit);

        bool pure = node->n_hit == 0 || node->n_nonhit == 0;
        bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_capped ||
            idx.size() < 2 * static_cast<std::size_t>(params_.min_leaf))
            return node;

        int best_feature = -1;
        double best_threshold = 0, best_ratio = 0;
        find_best_split(idx, best_feature, best_threshold, best_ratio);
        if (best_feature < 0) return node;

        std::vector<std::size_t> left_idx, right_idx;
        split(idx, best_feature, best_threshold, left_idx, right_idx);
        node->is_leaf = false;
        node->feature = best_feature;
        node->threshold = best_threshold;
        node->left = grow(left_idx, depth + 1);
        node->right = grow(right_idx, depth + 1);
        return node;
    }

    void find_best_split(const std::vector<std::size_t>& idx, int& best_feature,
                         double& best_threshold, double& best_ratio) const {
        const double n = static_cast<double>(idx.size());
        double hits = 0, nonhits = 0;
        count(idx, hits, nonhits);
        const double parent_h = entropy2(hits, nonhits);

        std::vector<std::size_t> order(idx);
        for (std::size_t f = 0; f < ds_.n_features(); ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return ds_.rows[a][f] < ds_.rows[b][f];
            });
            double lh = 0, ln = 0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                (ds_.labels[order[i]] == SongClass::Hit ? lh : ln) += 1;
                double v = ds_.rows[order[i]][f];
                double next = ds_.rows[order[i + 1]][f];
                if (v == next) continue;
                double nl = lh + ln, nr = n - nl;
                if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
                double gain = parent_h - (nl / n) * entropy2(lh, ln) -
                              (nr / n) * entropy2(hits - lh, nonhits - ln);
                if (gain <= 1e-12) continue;
                double split_info = entropy2(nl, nr);
                double ratio = gain / split_info;
                if (ratio > best_ratio) {
                    best_ratio = ratio;
                    best_feature = static_cast<int>(f);
                    best_threshold = v + (next - v) / 2;
                }
            }
        }
    }

    void split(const std::vector<std::size_t>& idx, int feature, double threshold,
               std::vector<std::size_t>& left, std::vector<std::size_t>& right) const {
        for (std::size_t i : idx)
            (ds_.rows[i][static_cast<std::size_t>(feature)] <= threshold ? left : right)
                .push_back(i);
    }

    void count(const std::vector<std::size_t>& idx, double& hits, double& nonhits) const {
        for (std::size_t i : idx)
            (ds_.labels[i] == SongClass::Hit ? hits : nonhits) += 1;
    }

    // Estimated errors of a subtree when `idx` is routed through it; leaf
    // classes stay as trained, counts come from the routed data.
    double subtree_errors(const TreeNode& node, const std::vector<std::size_t>& idx) const {
        double hits = 0, nonhits = 0;
        count(idx, hits, nonhits);
        if (node.is_leaf) {
            SongClass cls = node.n_hit >= node.n_nonhit ? SongClass::Hit : SongClass::NonHit;
            double e = cls == SongClass::Hit ? nonhits : hits;
            return e + added_errors(hits + nonhits, e, params_.prune_confidence);
        }
        std::vector<std::size_t> left_idx, right_idx;
        split(idx, node.feature, node.threshold, left_idx, right_idx);
        return subtree_errors(*node.left, left_idx) + subtree_errors(*node.right, right_idx);
    }

    // Re-fits a subtree's counts (and leaf majorities) from redistributed
    // data, keeping the split structure.
    void refit(TreeNode& node, const std::vector<std::size_t>& idx) const {
        node.n_hit = 0;
        node.n_nonhit = 0;
        count(idx, node.n_hit, node.n_nonhit);
        if (node.is_leaf) return;
        std::vector<std::size_t> left_idx, right_idx;
        split(idx, node.feature, node.threshold, left_idx, right_idx);
        refit(*node.left, left_idx);
        refit(*node.right, right_idx);
    }

    // Pessimistic error pruning with subtree raising: at each node compare
    // keeping the subtree, collapsing to a leaf, and raising the larger
    // branch (re-fitted on this node's data).
    void prune(TreeNode& node, const std::vector<std::size_t>& idx) {
        if (node.is_leaf) return;
        std::vector<std::size_t> left_idx, right_idx;
        split(idx, node.feature, node.threshold, left_idx, right_idx);
        prune(*node.left, left_idx);
        prune(*node.right, right_idx);

        double tree_err = subtree_errors(*node.left, left_idx) +
                          subtree_errors(*node.right, right_idx);
        double leaf_err = leaf_estimated_errors(node.n_hit, node.n_nonhit,
                                                params_.prune_confidence);
        TreeNode* largest =
            left_idx.size() >= right_idx.size() ? node.left.get() : node.right.get();
        double raise_err = subtree_errors(*largest, idx);

        if (leaf_err <= tree_err + 0.1 && leaf_err <= raise_err + 0.1) {
            node.is_leaf = true;
            node.feature = -1;
            node.left.reset();
            node.right.reset();
        } else if (raise_err <= tree_err + 0.1) {
            auto raised = largest == node.left.get() ? std::move(node.left)
                                                     : std::move(node.right);
            node = std::move(*raised);
            refit(node, idx);
            prune(node, idx);
        }
    }

    const Dataset& ds_;
    const C45Params& params_;
};

inline int flatten(const TreeNode& node, std::vector<DecisionTreeModel::Node>& out) {
    int id = static_cast<int>(out.size());
    out.emplace_back();
    out[static_cast<std::size_t>(id)].is_leaf = node.is_leaf;
    out[static_cast<std::size_t>(id)].feature = node.feature;
    out[static_cast<std::size_t>(id)].threshold = node.threshold;
    out[static_cast<std::size_t>(id)].n_hit = node.n_hit;
    out[static_cast<std::size_t>(id)].n_nonhit = node.n_nonhit;
    if (!node.is_leaf) {
        int l = flatten(*node.left, out);
        int r = flatten(*node.right, out);
        out[static_cast<std::size_t>(id)].left = l;
        out[static_cast<std::size_t>(id)].right = r;
    }
    return id;
}

}  // namespace detail

// Recursive gain-ratio splitting with C4.5-style pessimistic pruning.
inline DecisionTreeModel c45_fit(const Dataset& train, const C45Params& params = {}) {
    if (train.n_rows() < 2) throw std::invalid_argument("c45_fit: need >= 2 instances");
    if (params.min_leaf < 1) throw std::invalid_argument("c45_fit: min_leaf >= 1");
    if (params.max_depth && *params.max_depth < 0)
        throw std::invalid_argument("c45_fit: max_depth >= 0");

    detail::C45Builder builder(train, params);
    auto root = builder.build();
    DecisionTreeModel m;
    m.feature_names_ = train.feature_names;
    detail::flatten(*root, m.nodes_);
    return m;
}

}  // namespace dancehit
