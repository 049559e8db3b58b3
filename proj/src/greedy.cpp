#include "treebench/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treebench/tuning.hpp"

namespace treebench {

namespace {

constexpr double kImproveTol = 1e-12;

Tree grow_rec(const BinaryDataset& d, const GrowConfig& cfg, const LeafObjective& obj,
              const BitVec& subset, int n, int pos, int depth) {
    int label = pos > n - pos ? 1 : 0;
    if (depth >= cfg.max_depth || n < 2 * cfg.min_support)
        return Tree::leaf(label);

    double node_cost = obj.from_counts(n, pos);
    int best_f = -1;
    double best_sum = std::numeric_limits<double>::infinity();
    int bn1 = 0, bp1 = 0;
    for (int f = 0; f < d.feature_count; ++f) {
        int n1 = BitVec::count_and(subset, d.features[f]);
        int n0 = n - n1;
        if (n1 < cfg.min_support || n0 < cfg.min_support) continue;
        int p1 = BitVec::count_and3(subset, d.features[f], d.labels);
        int p0 = pos - p1;
        double sum = obj.from_counts(n0, p0) + obj.from_counts(n1, p1);
        if (sum < best_sum - kImproveTol) {  // ties keep the lowest feature id
            best_sum = sum;
            best_f = f;
            bn1 = n1;
            bp1 = p1;
        }
    }
    if (best_f < 0 || best_sum >= node_cost - kImproveTol)
        return Tree::leaf(label);

    BitVec S1 = subset & d.features[best_f];
    BitVec S0 = subset.and_not(d.features[best_f]);
    return Tree::branch(best_f,
                        grow_rec(d, cfg, obj, S0, n - bn1, pos - bp1, depth + 1),
                        grow_rec(d, cfg, obj, S1, bn1, bp1, depth + 1));
}

} // namespace

Tree grow(const BinaryDataset& d, const GrowConfig& cfg) {
    if (d.instance_count < 1) throw std::invalid_argument("dataset is empty");
    if (cfg.min_support < 1) throw std::invalid_argument("min_support must be >= 1");
    GrowConfig c = cfg;
    c.max_depth = std::min(cfg.max_depth, kGreedyDepthCap);
    LeafObjective obj(c.kind, c.params);
    BitVec all = BitVec::ones(d.instance_count);
    return grow_rec(d, c, obj, all, d.instance_count, d.positives(), 0);
}

namespace {

// Mutable pruning workspace mirroring the tree.
struct PruneNode {
    int feature = -1;
    int left = -1, right = -1;
    int label = 0;
    int n = 0, pos = 0;
    bool pruned = false;  // subtree collapsed to a leaf
    int leaf_error() const { return std::min(pos, n - pos); }
    bool is_leaf() const { return feature < 0 || pruned; }
};

struct PruneState {
    std::vector<PruneNode> nodes;

    int subtree_error(int i) const {
        const auto& nd = nodes[i];
        if (nd.is_leaf()) return nd.leaf_error();
        return subtree_error(nd.left) + subtree_error(nd.right);
    }
    int subtree_leaves(int i) const {
        const auto& nd = nodes[i];
        if (nd.is_leaf()) return 1;
        return subtree_leaves(nd.left) + subtree_leaves(nd.right);
    }

    // Weakest-link statistic of an unpruned internal node.
    double link_g(int i) const {
        int err_leaf = nodes[i].leaf_error();
        int err_sub = subtree_error(i);
        int leaves = subtree_leaves(i);
        return static_cast<double>(err_leaf - err_sub) / (leaves - 1);
    }

    void collect_internal(int i, std::vector<int>& out) const {
        const auto& nd = nodes[i];
        if (nd.is_leaf()) return;
        out.push_back(i);
        collect_internal(nd.left, out);
        collect_internal(nd.right, out);
    }

    Tree snapshot(int i) const {
        const auto& nd = nodes[i];
        if (nd.is_leaf()) return Tree::leaf(nd.pos > nd.n - nd.pos ? 1 : 0);
        return Tree::branch(nd.feature, snapshot(nd.left), snapshot(nd.right));
    }
};

void fill_counts(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset,
                 PruneState& st) {
    const auto& src = t.node(node);
    auto& dst = st.nodes[node];
    dst.feature = src.feature;
    dst.left = src.left;
    dst.right = src.right;
    dst.label = src.label;
    dst.n = subset.count();
    dst.pos = BitVec::count_and(subset, d.labels);
    if (!src.is_leaf()) {
        fill_counts(t, d, src.left, subset.and_not(d.features[src.feature]), st);
        fill_counts(t, d, src.right, subset & d.features[src.feature], st);
    }
}

} // namespace

CcpPath ccp_path(const Tree& t, const BinaryDataset& d) {
    if (t.max_feature_id() >= d.feature_count)
        throw std::out_of_range("tree references feature id beyond dataset feature count");
    PruneState st;
    st.nodes.resize(t.nodes().size());
    fill_counts(t, d, 0, BitVec::ones(d.instance_count), st);

    CcpPath path;
    double last_alpha = -1.0;
    for (;;) {
        std::vector<int> internal;
        st.collect_internal(0, internal);
        if (internal.empty()) break;
        double min_g = std::numeric_limits<double>::infinity();
        for (int i : internal) min_g = std::min(min_g, st.link_g(i));
        double alpha = std::max(min_g, 0.0);
        // Collapse every weakest link at this alpha in one step so the path
        // alphas stay strictly increasing.
        for (int i : internal)
            if (st.link_g(i) <= min_g + kImproveTol) st.nodes[i].pruned = true;
        if (!path.entries.empty() && alpha <= last_alpha + kImproveTol) {
            path.entries.back().second = st.snapshot(0);
        } else if (path.entries.empty() && alpha > kImproveTol) {
            // The unpruned tree itself anchors alpha 0.
            // (Rebuild it from counts so labels are majority labels.)
            PruneState fresh = st;
            for (auto& nd : fresh.nodes) nd.pruned = false;
            path.entries.emplace_back(0.0, fresh.snapshot(0));
            path.entries.emplace_back(alpha, st.snapshot(0));
            last_alpha = alpha;
        } else {
            path.entries.emplace_back(alpha, st.snapshot(0));
            last_alpha = alpha;
        }
    }
    if (path.entries.empty())
        path.entries.emplace_back(0.0, st.snapshot(0));
    return path;
}

std::vector<double> ccp_midpoints(const CcpPath& path) {
    std::vector<double> alphas;
    for (const auto& [a, tree] : path.entries) alphas.push_back(a);
    std::vector<double> out;
    out.push_back(0.0);
    std::vector<double> positive;
    for (double a : alphas)
        if (a > 0.0) positive.push_back(a);
    for (std::size_t i = 0; i + 1 < positive.size(); ++i)
        out.push_back(std::sqrt(positive[i] * positive[i + 1]));
    if (!positive.empty()) out.push_back(positive.back());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Tree prune_at(const CcpPath& path, double alpha) {
    if (path.entries.empty()) throw std::invalid_argument("empty cost-complexity path");
    const Tree* chosen = &path.entries.front().second;
    for (const auto& [a, tree] : path.entries)
        if (a <= alpha) chosen = &tree;
    return *chosen;
}

namespace {

double holdout_accuracy(const Tree& t, const BinaryDataset& d) {
    BitVec pred = predict_all(t, d);
    BitVec mismatch = pred.and_not(d.labels) | d.labels.and_not(pred);
    return 1.0 - static_cast<double>(mismatch.count()) / d.instance_count;
}

} // namespace

Tree fit_tuned(const BinaryDataset& d, const GrowConfig& cfg, std::uint64_t cv_seed) {
    int k = fold_count(d.instance_count);
    Tree full = grow(d, cfg);
    CcpPath full_path = ccp_path(full, d);
    std::vector<double> candidates = ccp_midpoints(full_path);
    if (candidates.size() == 1) return prune_at(full_path, candidates.front());

    auto folds = stratified_kfold(d, k, cv_seed);
    std::vector<double> mean_acc(candidates.size(), 0.0);
    for (const auto& [train_idx, val_idx] : folds) {
        BinaryDataset train = subset_dataset(d, train_idx);
        BinaryDataset val = subset_dataset(d, val_idx);
        Tree fold_tree = grow(train, cfg);
        CcpPath fold_path = ccp_path(fold_tree, train);
        for (std::size_t c = 0; c < candidates.size(); ++c)
            mean_acc[c] += holdout_accuracy(prune_at(fold_path, candidates[c]), val);
    }

    // candidates are ascending, so on ties the larger alpha wins.
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
        if (mean_acc[c] >= mean_acc[best] - kImproveTol) best = c;
    return prune_at(full_path, candidates[best]);
}

} // namespace treebench
