#include "treebench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treebench/rng.hpp"

namespace treebench {

namespace {

RawDataset matrix_to_raw(const std::vector<std::vector<double>>& columns,
                         const std::vector<int>& labels) {
    RawDataset raw;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        raw.columns.push_back(RawColumn{"x" + std::to_string(c), ColumnKind::Numeric});
        raw.numeric.push_back(columns[c]);
        raw.category.emplace_back();
    }
    raw.labels = labels;
    return raw;
}

std::vector<std::vector<double>> sample_uniform_matrix(Rng& rng, int rows, int cols) {
    std::vector<std::vector<double>> m(cols, std::vector<double>(rows));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m[c][r] = rng.uniform();
    return m;
}

void add_feature_noise(Rng& rng, std::vector<std::vector<double>>& m, double f) {
    if (f <= 0.0) return;
    int rows = static_cast<int>(m.front().size());
    for (int r = 0; r < rows; ++r)
        for (auto& col : m) col[r] += rng.uniform(-f, f);
}

// Random truth tree grown by repeatedly splitting a uniformly chosen
// feasible (leaf, feature) pair; children get opposite labels.
struct TruthBuilder {
    const BinaryDataset& d;
    int max_depth;
    int min_leaf;
    Rng& rng;

    struct LeafState {
        BitVec subset;
        int depth;
        int label;
    };

    Tree build(bool& feasible) {
        std::vector<LeafState> leaves;
        std::vector<Tree> shapes;  // parallel partial trees, grown bottom-up via rebuild
        // Represent the growing tree as a recursive structure of indices.
        struct NodeRec {
            int feature = -1;
            int left = -1, right = -1;
            int leaf_slot = -1;
        };
        std::vector<NodeRec> nodes;
        nodes.push_back(NodeRec{});
        leaves.push_back(LeafState{BitVec::ones(d.instance_count), 0, rng.coin() ? 1 : 0});
        nodes[0].leaf_slot = 0;
        std::vector<int> leaf_node(1, 0);  // leaf slot -> node index

        bool split_any = false;
        for (;;) {
            // All feasible (leaf, feature) pairs under the current frontier.
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t s = 0; s < leaves.size(); ++s) {
                if (leaf_node[s] < 0) continue;  // already split
                const LeafState& ls = leaves[s];
                if (ls.depth >= max_depth) continue;
                for (int f = 0; f < d.feature_count; ++f) {
                    int n1 = BitVec::count_and(ls.subset, d.features[f]);
                    int n0 = ls.subset.count() - n1;
                    if (n1 >= min_leaf && n0 >= min_leaf)
                        pairs.emplace_back(static_cast<int>(s), f);
                }
            }
            if (pairs.empty()) break;
            auto [slot, f] = pairs[rng.uniform_int(static_cast<int>(pairs.size()))];
            split_any = true;

            LeafState parent = leaves[slot];
            int node_idx = leaf_node[slot];
            leaf_node[slot] = -1;

            int first_label = rng.coin() ? 1 : 0;
            LeafState left{parent.subset.and_not(d.features[f]), parent.depth + 1, first_label};
            LeafState right{parent.subset & d.features[f], parent.depth + 1, 1 - first_label};

            nodes[node_idx].feature = f;
            nodes[node_idx].left = static_cast<int>(nodes.size());
            nodes.push_back(NodeRec{});
            nodes[node_idx].right = static_cast<int>(nodes.size());
            nodes.push_back(NodeRec{});

            leaves.push_back(left);
            leaf_node.push_back(nodes[node_idx].left);
            nodes[nodes[node_idx].left].leaf_slot = static_cast<int>(leaves.size()) - 1;
            leaves.push_back(right);
            leaf_node.push_back(nodes[node_idx].right);
            nodes[nodes[node_idx].right].leaf_slot = static_cast<int>(leaves.size()) - 1;
        }
        feasible = split_any;
        return materialize(nodes, leaves, 0);
    }

    template <typename Nodes>
    Tree materialize(const Nodes& nodes, const std::vector<LeafState>& leaves, int idx) {
        const auto& nd = nodes[idx];
        if (nd.feature < 0) return Tree::leaf(leaves[nd.leaf_slot].label);
        return Tree::branch(nd.feature, materialize(nodes, leaves, nd.left),
                            materialize(nodes, leaves, nd.right));
    }
};

std::vector<int> labels_from_tree(const Tree& t, const BinaryDataset& d) {
    BitVec pred = predict_all(t, d);
    std::vector<int> labels(d.instance_count);
    for (int i = 0; i < d.instance_count; ++i) labels[i] = pred.test(i) ? 1 : 0;
    return labels;
}

} // namespace

BitVec flip_class_noise(const BitVec& labels, double c, std::uint64_t seed) {
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("class noise fraction must be in [0,1]");
    BitVec out = labels;
    int flips = static_cast<int>(std::floor(c * labels.size()));
    if (flips == 0) return out;
    Rng rng(seed);
    for (int idx : rng.sample_without_replacement(labels.size(), flips)) out.flip(idx);
    return out;
}

SyntheticBundle gen_tree_dataset(const SyntheticTreeConfig& cfg) {
    if (cfg.n < 2 * cfg.min_leaf)
        throw std::invalid_argument("need at least 2*min_leaf train instances");
    if (cfg.class_noise < 0.0 || cfg.class_noise > 0.5)
        throw std::invalid_argument("class noise must be in [0, 0.5]");
    Rng rng(cfg.seed);

    auto train_cols = sample_uniform_matrix(rng, cfg.n, cfg.p);
    add_feature_noise(rng, train_cols, cfg.feature_noise);

    SyntheticBundle bundle;
    std::vector<int> zero_labels(cfg.n, 0);
    bundle.train_raw = matrix_to_raw(train_cols, zero_labels);
    bundle.binarizer = binarize_fit(bundle.train_raw, 10);
    BinaryDataset train_unlabeled = binarize_apply(bundle.binarizer, bundle.train_raw);

    TruthBuilder builder{train_unlabeled, cfg.depth, cfg.min_leaf, rng};
    bundle.truth = builder.build(bundle.feasible);
    bundle.truth_features = bundle.truth.used_features();

    std::vector<int> truth_labels = labels_from_tree(bundle.truth, train_unlabeled);
    bundle.train_raw.labels = truth_labels;
    BitVec labels(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
        if (truth_labels[i]) labels.set(i);
    labels = flip_class_noise(labels, cfg.class_noise, rng.next_u64());

    bundle.train = train_unlabeled;
    bundle.train.labels = labels;
    for (int i = 0; i < cfg.n; ++i) bundle.train_raw.labels[i] = labels.test(i) ? 1 : 0;

    int test_n = cfg.test_per_leaf * bundle.truth.leaf_count();
    auto test_cols = sample_uniform_matrix(rng, test_n, cfg.p);
    std::vector<int> test_zero(test_n, 0);
    bundle.test_raw = matrix_to_raw(test_cols, test_zero);
    bundle.test = binarize_apply(bundle.binarizer, bundle.test_raw, bundle.train.predicate_ids);
    BitVec test_pred = predict_all(bundle.truth, bundle.test);
    bundle.test.labels = test_pred;
    for (int i = 0; i < test_n; ++i) bundle.test_raw.labels[i] = test_pred.test(i) ? 1 : 0;

    return bundle;
}

SyntheticLinearResult gen_linear_dataset(int n, int p, double feature_noise, double class_noise,
                                         int test_size, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need at least 2 train instances");
    Rng rng(seed);

    auto train_cols = sample_uniform_matrix(rng, n, p);
    add_feature_noise(rng, train_cols, feature_noise);
    std::vector<double> w(p);
    for (int j = 0; j < p; ++j) w[j] = rng.normal();

    auto dot = [&](const std::vector<std::vector<double>>& cols, int row) {
        double s = 0.0;
        for (int j = 0; j < p; ++j) s += w[j] * cols[j][row];
        return s;
    };

    std::vector<double> products(n);
    for (int i = 0; i < n; ++i) products[i] = dot(train_cols, i);
    std::vector<double> sorted = products;
    std::sort(sorted.begin(), sorted.end());
    double bias = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;

    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = products[i] > bias ? 1 : 0;

    SyntheticLinearResult out;
    out.train_raw = matrix_to_raw(train_cols, labels);
    out.binarizer = binarize_fit(out.train_raw, 10);
    out.train = binarize_apply(out.binarizer, out.train_raw);
    out.train.labels = flip_class_noise(out.train.labels, class_noise, rng.next_u64());
    for (int i = 0; i < n; ++i) out.train_raw.labels[i] = out.train.labels.test(i) ? 1 : 0;

    auto test_cols = sample_uniform_matrix(rng, test_size, p);
    std::vector<int> test_labels(test_size);
    for (int i = 0; i < test_size; ++i) test_labels[i] = dot(test_cols, i) > bias ? 1 : 0;
    out.test_raw = matrix_to_raw(test_cols, test_labels);
    out.test = binarize_apply(out.binarizer, out.test_raw, out.train.predicate_ids);
    return out;
}

} // namespace treebench
