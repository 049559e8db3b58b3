#pragma once

#include <cstdint>
#include <vector>

#include "treebench/data.hpp"
#include "treebench/tree.hpp"

namespace treebench {

struct SyntheticTreeConfig {
    int n = 1000;                // train instances
    int p = 3;                   // numeric features
    int depth = 3;               // true tree max depth
    double feature_noise = 0.0;  // uniform half-width f
    double class_noise = 0.0;    // fraction c of train labels flipped
    int test_per_leaf = 1000;
    int min_leaf = 5;
    std::uint64_t seed = 0;
};

struct SyntheticBundle {
    BinaryDataset train;   // noisy
    BinaryDataset test;    // noise-free, binarized with the train binarizer
    Tree truth;
    std::vector<int> truth_features;
    bool feasible = true;  // false when no first split with min_leaf both sides exists

    RawDataset train_raw;
    RawDataset test_raw;
    Binarizer binarizer;
};

/// The pipeline runs in this order: sample uniform features, add feature
/// noise to the train copies, binarize the noisy train on ten quantiles per
/// feature, grow a random realizable truth tree (random feasible splits,
/// alternating sibling labels, every leaf >= min_leaf train instances),
/// label the train set by the truth, flip exactly floor(c*n) labels, then
/// draw the noise-free test set (test_per_leaf per truth leaf) and binarize
/// it with the train thresholds.
SyntheticBundle gen_tree_dataset(const SyntheticTreeConfig& cfg);

/// Linear-separator ground truth: weights drawn standard normal, the bias
/// set to the median of w.x over the train data so classes balance, then
/// the same noise/binarization pipeline as the tree variant.
struct SyntheticLinearResult {
    BinaryDataset train;
    BinaryDataset test;
    RawDataset train_raw;
    RawDataset test_raw;
    Binarizer binarizer;
};

SyntheticLinearResult gen_linear_dataset(int n, int p, double feature_noise, double class_noise,
                                         int test_size, std::uint64_t seed);

/// Flips exactly floor(c * size) bits, chosen uniformly without replacement.
BitVec flip_class_noise(const BitVec& labels, double c, std::uint64_t seed);

} // namespace treebench
