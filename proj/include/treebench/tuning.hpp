#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treebench/data.hpp"
#include "treebench/objectives.hpp"
#include "treebench/optimal.hpp"

namespace treebench {

enum class TuneMethod { None, Depth, Size, ComplexityCost, MinSupport, QuestionLength, Smoothing };

std::string tune_method_name(TuneMethod m);
TuneMethod tune_method_from_name(const std::string& name);

/// Cross-validation fold count from dataset size: 20 folds up to 100
/// instances, 10 up to 250, 5 beyond; never more than n.
int fold_count(int n);

struct TuneGrid {
    TuneMethod method = TuneMethod::None;
    // Deduplicated ascending settings: integers (as exact doubles) for
    // Depth/Size/MinSupport counts, reals for lambda/omega/x.
    std::vector<double> values;
    int k_requested = 0;
};

/// Hyperparameter grid per method. Log-spaced grids keep both range
/// endpoints and drop interior values closer than the method's minimum step
/// to their kept predecessor; the unconstraining setting is always present.
TuneGrid make_grid(TuneMethod method, int k, int dataset_size, double majority_fraction,
                   int max_depth);

struct TuneRow {
    double setting = 0.0;
    int fold = 0;
    double val_accuracy = 0.0;
    bool failed = false;
};

struct TuneResult {
    TuneMethod method = TuneMethod::None;
    double chosen_setting = 0.0;
    Solution final;
    std::vector<TuneRow> table;
    std::uint64_t solver_calls = 0;
};

/// Cross-validated tuning of the optimal solver over the method's grid.
/// Each grid value trains with the corresponding limit/penalty/objective
/// variant; the best mean validation accuracy wins and ties go to the more
/// regularized setting. The final model is retrained on the full data.
TuneResult tune(const BinaryDataset& d, ObjectiveKind kind, const ObjectiveParams& params,
                TuneMethod method, int k, int max_depth, std::uint64_t seed, int jobs = 1,
                const SolveOptions& opts = {});

} // namespace treebench
