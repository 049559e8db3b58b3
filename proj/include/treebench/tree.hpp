#pragma once

#include <string>
#include <vector>

#include "treebench/bitvec.hpp"
#include "treebench/objectives.hpp"

#include <json.hpp>

namespace treebench {

struct BinaryDataset;

/// Binary classification tree over binary feature ids. Branches route an
/// instance right when the feature bit is 1. Immutable after construction.
class Tree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        int left = -1;
        int right = -1;
        int label = 0;
        bool is_leaf() const { return feature < 0; }
    };

    Tree() : nodes_{Node{}} {}

    static Tree leaf(int label);
    static Tree branch(int feature, const Tree& left, const Tree& right);

    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(int i) const { return nodes_[i]; }
    int root() const { return 0; }

    bool is_leaf() const { return nodes_[0].is_leaf(); }
    int depth() const;
    int leaf_count() const;
    int branching_count() const { return static_cast<int>(nodes_.size()) - leaf_count(); }
    int max_feature_id() const;

    /// Feature ids used by branch nodes, deduplicated and sorted.
    std::vector<int> used_features() const;

    bool operator==(const Tree& o) const;

    Tree subtree(int node_index) const;

private:
    std::vector<Node> nodes_;  // root at index 0
};

struct TreeMetrics {
    int leaves = 0;
    int branching_nodes = 0;
    int depth = 0;
    double question_length = 0.0;  // mean branching nodes visited per instance
};

/// Label of the leaf reached by `instance` (bit per feature id).
int predict(const Tree& t, const BitVec& instance);

/// Predicted labels for every instance of the dataset, as a bitset of
/// positive predictions.
BitVec predict_all(const Tree& t, const BinaryDataset& d);

/// Per-leaf (n, e) under majority relabeling (ties -> label 0), leaves in
/// preorder. Empty leaves contribute (0, 0).
std::vector<LeafStats> leaf_stats(const Tree& t, const BinaryDataset& d);

TreeMetrics tree_metrics(const Tree& t, const BinaryDataset& d);

/// Copy of `t` with every leaf label reset to the majority class of the
/// instances routed to it (ties -> 0).
Tree relabel_by_majority(const Tree& t, const BinaryDataset& d);

/// Canonical text form, e.g. "B3(L0,L1)". Unique per tree.
std::string serialize(const Tree& t);
Tree deserialize(const std::string& text);

/// Comparison matching lexicographic order of the canonical serializations,
/// without building the strings.
bool canonical_less(const Tree& a, const Tree& b);

nlohmann::json tree_to_json(const Tree& t);
Tree tree_from_json(const nlohmann::json& j);

} // namespace treebench
