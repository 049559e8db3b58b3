#pragma once

#include <cstdint>
#include <vector>

#include "treebench/data.hpp"
#include "treebench/objectives.hpp"
#include "treebench/tree.hpp"

namespace treebench {

enum class NumericMode { BinaryFeatures, RawThresholds };

struct GrowConfig {
    ObjectiveKind kind = ObjectiveKind::Gini;
    ObjectiveParams params;
    int max_depth = 20;  // "unlimited" is capped at 20
    int min_support = 1;
    NumericMode numeric_mode = NumericMode::BinaryFeatures;
};

inline constexpr int kGreedyDepthCap = 20;

/// Top-down induction: at each node take the split minimizing the summed
/// child criterion, but only if it strictly improves on the node's own value
/// (tolerance 1e-12) and both children keep min_support instances. Ties go
/// to the lowest feature id. Leaves are labeled by majority, ties -> 0.
Tree grow(const BinaryDataset& d, const GrowConfig& cfg);

/// Cost-complexity path from weakest-link pruning on misclassification
/// counts, RPart style: alphas strictly increasing starting at 0, subtrees
/// nested, last subtree a single leaf.
struct CcpPath {
    std::vector<std::pair<double, Tree>> entries;
};

CcpPath ccp_path(const Tree& t, const BinaryDataset& d);

/// Candidate alphas: 0, the geometric means of consecutive positive path
/// alphas, and the largest path alpha (so both the full tree and the single
/// leaf stay reachable). Sorted, deduplicated.
std::vector<double> ccp_midpoints(const CcpPath& path);

/// The path subtree selected by penalty alpha (largest path alpha <= alpha).
Tree prune_at(const CcpPath& path, double alpha);

/// Grows the full tree, cross-validates the midpoint alphas (fold count from
/// the dataset-size rule), picks the best mean validation accuracy — ties go
/// to the larger alpha — and prunes the full-data tree there.
Tree fit_tuned(const BinaryDataset& d, const GrowConfig& cfg, std::uint64_t cv_seed);

} // namespace treebench
