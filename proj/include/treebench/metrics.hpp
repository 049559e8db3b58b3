#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treebench/data.hpp"
#include "treebench/tree.hpp"

namespace treebench {

double accuracy(const Tree& t, const BinaryDataset& d);

/// Accuracy percentages per (dataset, method); rectangular, no missing cells.
struct ScoreMatrix {
    std::vector<std::string> methods;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> scores;  // [dataset][method], percentages
};

/// Mean rank per method. Per dataset, scores round to one decimal of the
/// percentage first; rank 1 is best and ties share the average of their
/// positions.
std::vector<double> average_ranks(const ScoreMatrix& m);

/// Nemenyi critical distance q_alpha * sqrt(k(k+1)/(6N)) for k methods over
/// N datasets, alpha in {0.05, 0.10}, k <= 20 (embedded q table).
double nemenyi_cd(int method_count, int dataset_count, double alpha);

/// True/false discovery rates over split-feature id sets. Conventions:
/// empty trained set -> fdr 0; empty truth set -> tdr 1.
std::pair<double, double> tdr_fdr(const Tree& trained, const Tree& truth);

/// Best observed test accuracy per leaf count.
struct ParetoCurve {
    std::map<int, double> points;
};

/// Size-weighted accuracy over sizes 1..n: fills gaps by linear
/// interpolation, extends the largest observation rightward, repairs the
/// curve to be nondecreasing, then averages with weights 1/i.
double swa(const ParetoCurve& curve, int n);

} // namespace treebench
