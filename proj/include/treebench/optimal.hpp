#pragma once

#include <cstdint>
#include <vector>

#include "treebench/data.hpp"
#include "treebench/objectives.hpp"
#include "treebench/tree.hpp"

namespace treebench {

struct SolveLimits {
    int max_depth = 0;
    int max_branching = 0;  // must be <= 2^max_depth - 1
};

struct Penalties {
    double lambda_cost = 0.0;  // per-leaf cost lambda * |D|
    double omega_cost = 0.0;   // per-branching-node cost omega * (instances through it)
    int min_support = 1;       // hard minimum leaf size
};

struct CacheStats {
    std::uint64_t subproblems = 0;
    std::uint64_t hits = 0;
};

struct Solution {
    Tree tree;
    double objective_value = 0.0;
    CacheStats cache_stats;
};

struct SolveOptions {
    // Solve depth<=2 subproblems from pairwise feature co-occurrence counts
    // instead of recursing on materialized subsets. Equivalent by
    // construction; the oracle tests exercise both paths.
    bool use_depth2_solver = true;
};

/// Exact minimum of sum_leaves f(n,e) + lambda|D|*leaves + omega*sum_b |b|
/// over all trees with depth <= max_depth, branching nodes <= max_branching,
/// and every leaf >= min_support instances. Ties among minimizers resolve to
/// fewest branching nodes, then smallest canonical serialization.
Solution solve(const BinaryDataset& d, ObjectiveKind kind, const ObjectiveParams& params,
               const SolveLimits& limits, const Penalties& pen, const SolveOptions& opts = {});

/// Exact objective of a given tree under the same accounting as solve().
/// Returns +infinity if any leaf falls below min_support.
double objective_of_tree(const Tree& t, const BinaryDataset& d, ObjectiveKind kind,
                         const ObjectiveParams& params, const Penalties& pen);

/// All structurally distinct trees within the limits (canonical-form dedup,
/// leaf labels zeroed), including the single leaf. Brute-force oracle;
/// guarded to feature_count <= 10 and max_depth <= 3.
std::vector<Tree> enumerate_trees(const BinaryDataset& d, const SolveLimits& limits);

} // namespace treebench
