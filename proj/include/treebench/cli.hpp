#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treebench/objectives.hpp"
#include "treebench/optimal.hpp"
#include "treebench/tuning.hpp"

namespace treebench::cli {

struct DataInput {
    std::string path;
    std::string label_column = "y";
    std::string schema_path;  // optional "name,kind" lines
    int quantiles = 10;
    int max_categories = 10;
};

struct FitConfig {
    DataInput data;
    std::string test_path;
    std::string method = "optimal";  // optimal | greedy
    ObjectiveKind objective = ObjectiveKind::Accuracy;
    ObjectiveParams params;
    int max_depth = 3;
    int max_branching = -1;  // -1 means 2^max_depth - 1
    double lambda = 0.0;
    double omega = 0.0;
    int min_support = 1;
    bool no_depth_limit = false;   // greedy only (depth cap 20)
    bool ccp = false;              // greedy: cost-complexity tuned selection
    std::string numeric_mode = "binary";  // binary | raw (greedy only)
    std::uint64_t seed = 0;
    bool use_depth2 = true;
    bool timings = false;
    std::string out_model;
    std::string out_report;
};

struct TuneConfig {
    DataInput data;
    std::string test_path;
    TuneMethod method = TuneMethod::Size;
    ObjectiveKind objective = ObjectiveKind::Accuracy;
    ObjectiveParams params;
    int k = 16;
    int max_depth = 4;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool use_depth2 = true;
    std::string out_model;
    std::string out_cv_table;
};

struct SynthConfig {
    std::string kind = "tree";  // tree | linear
    int n = 1000;
    int p = 3;
    int depth = 3;
    double feature_noise = 0.0;
    double class_noise = 0.0;
    int test_per_leaf = 1000;
    int test_size = 8000;  // linear variant
    int min_leaf = 5;
    std::uint64_t seed = 0;
    std::string out_train;
    std::string out_test;
    std::string out_truth;
};

struct BenchConfig {
    // Either a synthetic generator or a fixed dataset drives the runs.
    std::string synth_kind = "tree";  // tree | linear | "" when data given
    DataInput data;                   // used when data.path nonempty
    std::string test_path;
    int n = 1000;
    int p = 3;
    int depth = 3;
    double feature_noise = 0.0;
    double class_noise = 0.0;
    int test_per_leaf = 1000;
    int reps = 10;
    // Comma list of method specs: optimal:<tune-method> | greedy:ccp |
    // greedy:none, each optionally suffixed :d<depth>.
    std::string methods = "optimal:size,greedy:ccp";
    ObjectiveKind objective = ObjectiveKind::Accuracy;
    ObjectiveKind greedy_objective = ObjectiveKind::Gini;
    int max_depth = 3;
    int k = 16;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool use_depth2 = true;
    bool timings = false;
    std::string out;
};

struct SwaConfig {
    DataInput data;          // used when data.path nonempty
    std::string test_path;
    std::string synth_kind;  // tree | linear when data.path empty
    int n = 1000;
    int p = 3;
    int depth = 3;
    double feature_noise = 0.0;
    double class_noise = 0.0;
    std::string method = "optimal";  // optimal | greedy
    ObjectiveKind objective = ObjectiveKind::Accuracy;
    int max_depth = 4;
    int max_size = 16;  // SWA_n upper size
    std::uint64_t seed = 0;
    bool use_depth2 = true;
    std::string out;
};

struct RankConfig {
    std::string scores_path;
    double alpha = 0.05;
    std::string out;
};

struct BinarizeConfig {
    DataInput data;
    std::string test_path;
    std::string numeric_mode = "binary";  // binary | raw
    std::string out_train;
    std::string out_test;
};

int run_fit(const FitConfig& cfg);
int run_tune(const TuneConfig& cfg);
int run_synth(const SynthConfig& cfg);
int run_benchmark(const BenchConfig& cfg);
int run_swa_sweep(const SwaConfig& cfg);
int run_rank(const RankConfig& cfg);
int run_binarize(const BinarizeConfig& cfg);

} // namespace treebench::cli
