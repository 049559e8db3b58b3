#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treebench/bitvec.hpp"

namespace treebench {

enum class ColumnKind { Numeric, Categorical };

struct RawColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
};

/// Tabular data before binarization. Cells are kept as strings for
/// categorical columns and parsed doubles for numeric ones.
struct RawDataset {
    std::vector<RawColumn> columns;
    std::vector<std::vector<double>> numeric;       // per column (empty for categorical)
    std::vector<std::vector<std::string>> category; // per column (empty for numeric)
    std::vector<int> labels;                        // 0/1 per row

    int row_count() const { return static_cast<int>(labels.size()); }
    int column_count() const { return static_cast<int>(columns.size()); }
};

/// Fitted binarization: thresholds per numeric column (strictly increasing),
/// retained categories per categorical column.
struct Binarizer {
    struct ColumnRule {
        std::string name;
        ColumnKind kind = ColumnKind::Numeric;
        std::vector<double> thresholds;        // predicates "value <= t"
        std::vector<std::string> categories;   // predicates "value == v"
        int predicate_count() const {
            return static_cast<int>(kind == ColumnKind::Numeric ? thresholds.size()
                                                                : categories.size());
        }
    };
    std::vector<ColumnRule> rules;

    int total_predicates() const {
        int n = 0;
        for (const auto& r : rules) n += r.predicate_count();
        return n;
    }
};

/// Feature-major bit matrix of binary predicates plus binary labels.
struct BinaryDataset {
    int feature_count = 0;
    int instance_count = 0;
    std::vector<BitVec> features;   // feature f -> bitset of instances where the predicate holds
    BitVec labels;                  // positive-class instances
    std::vector<std::string> feature_names;
    std::vector<int> predicate_ids;  // binarizer-global predicate index per feature

    int positives() const { return labels.count(); }
    double majority_fraction() const {
        int pos = positives();
        return static_cast<double>(std::max(pos, instance_count - pos)) / instance_count;
    }
};

/// Loads a CSV with a header row. The label column must hold exactly two
/// distinct values; they map to {0,1} in lexicographic order. Column kinds
/// are inferred (all values parse as numbers -> numeric) unless overridden
/// by `schema` (column name -> kind). Missing values are a load error.
RawDataset load_csv(const std::string& path, const std::string& label_column,
                    const std::vector<std::pair<std::string, ColumnKind>>& schema = {});

/// Quantile thresholds at levels i/(quantile_count+1), i = 1..quantile_count
/// (nearest-rank estimator), deduplicated, dropping thresholds that would be
/// all-ones on the fit data. Categorical columns retain the most frequent
/// values (ties broken lexicographically), at most `max_categories`.
Binarizer binarize_fit(const RawDataset& raw, int quantile_count = 10, int max_categories = 10);

/// All-midpoints binarizer: one threshold between each pair of consecutive
/// distinct values per numeric column, every observed category retained.
/// This is the unmodified-CART split space.
Binarizer binarize_fit_midpoints(const RawDataset& raw);

/// Applies the binarizer; predicate columns that are all-zero or all-one on
/// this data are dropped. Feature order is deterministic: column order, then
/// threshold/category order.
BinaryDataset binarize_apply(const Binarizer& b, const RawDataset& raw);

/// Applies exactly the given predicates (by binarizer-global index), with no
/// degeneracy dropping, so a test set shares feature ids with the training
/// set it must align to.
BinaryDataset binarize_apply(const Binarizer& b, const RawDataset& raw,
                             const std::vector<int>& keep_predicates);

/// k disjoint stratified validation folds; per-class counts across folds
/// differ by at most one. Returns (train_indices, validation_indices) pairs.
std::vector<std::pair<std::vector<int>, std::vector<int>>>
stratified_kfold(const BinaryDataset& d, int k, std::uint64_t seed);

/// Row subset of a dataset; feature ids are preserved.
BinaryDataset subset_dataset(const BinaryDataset& d, const std::vector<int>& indices);

} // namespace treebench
