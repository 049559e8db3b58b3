#include <doctest.h>

#include <set>

#include "treebench/metrics.hpp"
#include "treebench/optimal.hpp"
#include "treebench/synth.hpp"

using namespace treebench;

namespace {

SyntheticTreeConfig base_config(std::uint64_t seed) {
    SyntheticTreeConfig cfg;
    cfg.n = 300;
    cfg.p = 3;
    cfg.depth = 3;
    cfg.test_per_leaf = 20;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("flip_class_noise counts") {
    BitVec labels(10);
    for (int i = 0; i < 5; ++i) labels.set(i);
    CHECK(flip_class_noise(labels, 0.0, 1) == labels);
    BitVec all = flip_class_noise(labels, 1.0, 1);
    for (int i = 0; i < 10; ++i) CHECK(all.test(i) != labels.test(i));
    BitVec half = flip_class_noise(labels, 0.5, 9);
    int hamming = 0;
    for (int i = 0; i < 10; ++i) hamming += half.test(i) != labels.test(i);
    CHECK(hamming == 5);
    CHECK(flip_class_noise(labels, 0.5, 9) == half);  // deterministic
}

TEST_CASE("noise-free bundle: train labels equal truth predictions") {
    SyntheticBundle b = gen_tree_dataset(base_config(1));
    REQUIRE(b.feasible);
    CHECK(predict_all(b.truth, b.train) == b.train.labels);
}

TEST_CASE("class noise flips exactly floor(c*n) labels") {
    SyntheticTreeConfig cfg = base_config(2);
    cfg.n = 100;
    cfg.class_noise = 0.2;
    SyntheticBundle noisy = gen_tree_dataset(cfg);
    BitVec clean = predict_all(noisy.truth, noisy.train);
    int differing = 0;
    for (int i = 0; i < 100; ++i) differing += clean.test(i) != noisy.train.labels.test(i);
    CHECK(differing == 20);
}

TEST_CASE("test set sizing and noise-freeness") {
    SyntheticBundle b = gen_tree_dataset(base_config(3));
    CHECK(b.test.instance_count == 20 * b.truth.leaf_count());
    CHECK(predict_all(b.truth, b.test) == b.test.labels);
    CHECK(accuracy(b.truth, b.test) == 1.0);
}

TEST_CASE("truth structure invariants") {
    for (std::uint64_t seed = 10; seed < 25; ++seed) {
        SyntheticTreeConfig cfg = base_config(seed);
        SyntheticBundle b = gen_tree_dataset(cfg);
        REQUIRE(b.feasible);
        CHECK(b.truth.depth() <= cfg.depth);
        CHECK(b.truth.leaf_count() <= (1 << cfg.depth));
        // every truth leaf holds at least min_leaf train instances
        for (const auto& s : leaf_stats(b.truth, b.train)) CHECK(s.n >= cfg.min_leaf);
        // sibling leaves carry different labels
        for (const auto& node : b.truth.nodes()) {
            if (node.is_leaf()) continue;
            const auto& l = b.truth.node(node.left);
            const auto& r = b.truth.node(node.right);
            if (l.is_leaf() && r.is_leaf()) CHECK(l.label != r.label);
        }
    }
}

TEST_CASE("noiseless truth is realizable by the solver") {
    for (std::uint64_t seed : {31, 32, 33}) {
        SyntheticTreeConfig cfg = base_config(seed);
        cfg.n = 400;
        SyntheticBundle b = gen_tree_dataset(cfg);
        Solution sol = solve(b.train, ObjectiveKind::Accuracy, {},
                             SolveLimits{cfg.depth, (1 << cfg.depth) - 1}, Penalties{});
        CHECK(sol.objective_value == 0.0);
    }
}

TEST_CASE("determinism and seed diversity") {
    SyntheticBundle a = gen_tree_dataset(base_config(7));
    SyntheticBundle b = gen_tree_dataset(base_config(7));
    CHECK(serialize(a.truth) == serialize(b.truth));
    CHECK(a.train.labels == b.train.labels);
    CHECK(a.test.labels == b.test.labels);

    std::set<std::string> truths;
    for (std::uint64_t seed = 100; seed < 200; ++seed) {
        SyntheticTreeConfig cfg = base_config(seed);
        cfg.test_per_leaf = 1;
        truths.insert(serialize(gen_tree_dataset(cfg).truth));
    }
    CHECK(truths.size() >= 99);
}

TEST_CASE("depth-0 config yields a degenerate infeasible bundle") {
    SyntheticTreeConfig cfg = base_config(4);
    cfg.depth = 0;
    SyntheticBundle b = gen_tree_dataset(cfg);
    CHECK(!b.feasible);
    CHECK(b.truth.is_leaf());
    CHECK(b.test.instance_count == cfg.test_per_leaf);
}

TEST_CASE("config validation") {
    SyntheticTreeConfig bad = base_config(1);
    bad.n = 9;  // below 2 * min_leaf
    CHECK_THROWS_AS(gen_tree_dataset(bad), std::invalid_argument);
    bad = base_config(1);
    bad.class_noise = 0.6;
    CHECK_THROWS_AS(gen_tree_dataset(bad), std::invalid_argument);
    CHECK_THROWS(flip_class_noise(BitVec(4), -0.1, 0));
}

TEST_CASE("linear dataset balance and 1-d threshold structure") {
    auto r = gen_linear_dataset(101, 1, 0.0, 0.0, 50, 5);
    int pos = r.train.labels.count();
    CHECK(std::abs(pos - 101 / 2) <= 1);

    // with one feature the separator is a threshold on that feature; a
    // single split classifies the train data up to the decile granularity
    // of the binarization (the class boundary sits at the median, the
    // nearest quantile thresholds are ~n/22 ranks away)
    Solution sol = solve(r.train, ObjectiveKind::Accuracy, {}, SolveLimits{3, 7}, Penalties{});
    CHECK(sol.objective_value <= 101.0 / 11.0 + 1.0);
    CHECK(sol.tree.branching_count() <= 2);

    auto even = gen_linear_dataset(100, 3, 0.0, 0.0, 50, 6);
    CHECK(std::abs(even.train.labels.count() - 50) <= 1);
}

TEST_CASE("linear class noise applies after labeling") {
    auto clean = gen_linear_dataset(100, 2, 0.0, 0.0, 10, 11);
    auto noisy = gen_linear_dataset(100, 2, 0.0, 0.3, 10, 11);
    int differing = 0;
    for (int i = 0; i < 100; ++i)
        differing += clean.train.labels.test(i) != noisy.train.labels.test(i);
    CHECK(differing == 30);
}
