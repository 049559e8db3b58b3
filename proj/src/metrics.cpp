#include "treebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace treebench {

double accuracy(const Tree& t, const BinaryDataset& d) {
    BitVec pred = predict_all(t, d);
    BitVec mismatch = pred.and_not(d.labels) | d.labels.and_not(pred);
    return 1.0 - static_cast<double>(mismatch.count()) / d.instance_count;
}

std::vector<double> average_ranks(const ScoreMatrix& m) {
    int k = static_cast<int>(m.methods.size());
    int N = static_cast<int>(m.datasets.size());
    if (k < 2 || N < 1) throw std::invalid_argument("rank matrix needs >= 2 methods, >= 1 dataset");
    std::vector<double> mean(k, 0.0);
    for (int ds = 0; ds < N; ++ds) {
        if (static_cast<int>(m.scores[ds].size()) != k)
            throw std::invalid_argument("score matrix is not rectangular");
        std::vector<double> rounded(k);
        for (int j = 0; j < k; ++j) rounded[j] = std::round(m.scores[ds][j] * 10.0) / 10.0;
        std::vector<int> order(k);
        for (int j = 0; j < k; ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return rounded[a] > rounded[b]; });
        int i = 0;
        while (i < k) {
            int j = i;
            while (j < k && rounded[order[j]] == rounded[order[i]]) ++j;
            double avg_rank = (i + 1 + j) / 2.0;  // mean of positions i+1..j
            for (int t = i; t < j; ++t) mean[order[t]] += avg_rank;
            i = j;
        }
    }
    for (double& v : mean) v /= N;
    return mean;
}

double nemenyi_cd(int method_count, int dataset_count, double alpha) {
    // Studentized range / sqrt(2) critical values for the Nemenyi test,
    // k = 2..20 (Demsar 2006, Table 5).
    static const double q05[] = {1.959964, 2.343701, 2.569032, 2.727774, 2.849705,
                                 2.948319, 3.030879, 3.101730, 3.163684, 3.218654,
                                 3.268004, 3.312739, 3.353618, 3.391230, 3.426041,
                                 3.458425, 3.488685, 3.517073, 3.543799};
    static const double q10[] = {1.644854, 2.052293, 2.291341, 2.459516, 2.588521,
                                 2.692732, 2.779884, 2.854606, 2.919889, 2.977768,
                                 3.029694, 3.076733, 3.119693, 3.159199, 3.195743,
                                 3.229723, 3.261461, 3.291224, 3.319233};
    if (method_count < 2 || method_count > 20)
        throw std::invalid_argument("nemenyi_cd supports 2 <= k <= 20");
    if (dataset_count < 2) throw std::invalid_argument("nemenyi_cd requires N >= 2");
    const double* q;
    if (alpha == 0.05) q = q05;
    else if (alpha == 0.10) q = q10;
    else throw std::invalid_argument("nemenyi_cd supports alpha in {0.05, 0.10}");
    double k = method_count, N = dataset_count;
    return q[method_count - 2] * std::sqrt(k * (k + 1.0) / (6.0 * N));
}

std::pair<double, double> tdr_fdr(const Tree& trained, const Tree& truth) {
    std::vector<int> s_trained = trained.used_features();
    std::vector<int> s_truth = truth.used_features();
    std::vector<int> common;
    std::set_intersection(s_trained.begin(), s_trained.end(), s_truth.begin(), s_truth.end(),
                          std::back_inserter(common));
    double tdr = s_truth.empty()
                     ? 1.0
                     : static_cast<double>(common.size()) / s_truth.size();
    double fdr = s_trained.empty()
                     ? 0.0
                     : static_cast<double>(s_trained.size() - common.size()) / s_trained.size();
    return {tdr, fdr};
}

double swa(const ParetoCurve& curve, int n) {
    if (curve.points.empty()) throw std::invalid_argument("empty Pareto curve");
    if (n < 1) throw std::invalid_argument("swa requires n >= 1");
    for (const auto& [size, acc] : curve.points)
        if (size < 1) throw std::invalid_argument("curve sizes must be >= 1");
    if (curve.points.begin()->first > 1)
        throw std::invalid_argument("size-1 anchor missing");
    if (curve.points.begin()->first > n)
        throw std::invalid_argument("smallest observed size exceeds n");

    std::vector<double> acc(n + 1, 0.0);
    int largest = curve.points.rbegin()->first;
    for (int i = 1; i <= n; ++i) {
        auto exact = curve.points.find(i);
        if (exact != curve.points.end()) {
            acc[i] = exact->second;
        } else if (i > largest) {
            acc[i] = curve.points.rbegin()->second;  // right-extension
        } else {
            auto hi = curve.points.upper_bound(i);
            auto lo = std::prev(hi);
            double t = static_cast<double>(i - lo->first) / (hi->first - lo->first);
            acc[i] = lo->second + t * (hi->second - lo->second);
        }
    }
    // Pareto repair: a larger tree never scores below a smaller one.
    for (int i = 2; i <= n; ++i) acc[i] = std::max(acc[i], acc[i - 1]);

    double num = 0.0, den = 0.0;
    for (int i = 1; i <= n; ++i) {
        num += acc[i] / i;
        den += 1.0 / i;
    }
    return num / den;
}

} // namespace treebench
