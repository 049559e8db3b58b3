#include "treebench/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "treebench/metrics.hpp"
#include "treebench/parallel.hpp"

namespace treebench {

namespace {

constexpr double kTieTol = 1e-12;

std::vector<double> logspace(double lo, double hi, int m) {
    if (m <= 1) return {hi};
    std::vector<double> out;
    out.reserve(m);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < m; ++i)
        out.push_back(std::exp(llo + i * (lhi - llo) / (m - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

// Drops interior values closer than `step` to their kept predecessor; both
// endpoints always survive (they anchor the range).
std::vector<double> apply_min_step(const std::vector<double>& v, double step) {
    if (v.size() <= 2) return v;
    std::vector<double> out{v.front()};
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] - out.back() >= step - 1e-15) out.push_back(v[i]);
    if (v.back() > out.back()) out.push_back(v.back());
    return out;
}

std::vector<double> round_to_ints(const std::vector<double>& v) {
    std::set<long long> seen;
    for (double x : v) seen.insert(static_cast<long long>(std::floor(x + 0.5)));
    std::vector<double> out;
    for (long long i : seen) out.push_back(static_cast<double>(i));
    return out;
}

void dedup_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::string tune_method_name(TuneMethod m) {
    switch (m) {
        case TuneMethod::None: return "none";
        case TuneMethod::Depth: return "depth";
        case TuneMethod::Size: return "size";
        case TuneMethod::ComplexityCost: return "cost";
        case TuneMethod::MinSupport: return "support";
        case TuneMethod::QuestionLength: return "qlen";
        case TuneMethod::Smoothing: return "smooth";
    }
    throw std::invalid_argument("unknown tune method");
}

TuneMethod tune_method_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(TuneMethod::Smoothing); ++i) {
        auto m = static_cast<TuneMethod>(i);
        if (tune_method_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown tune method: " + name);
}

int fold_count(int n) {
    if (n < 2) throw std::invalid_argument("fold_count requires n >= 2");
    int k = n <= 100 ? 20 : n <= 250 ? 10 : 5;
    return std::min(k, n);
}

TuneGrid make_grid(TuneMethod method, int k, int dataset_size, double majority_fraction,
                   int max_depth) {
    if (k < 2) throw std::invalid_argument("grid size k must be >= 2");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (method == TuneMethod::MinSupport &&
        !(majority_fraction >= 0.5 && majority_fraction < 1.0))
        throw std::invalid_argument("majority_fraction must lie in [0.5, 1)");
    if (dataset_size < 1) throw std::invalid_argument("dataset_size must be >= 1");

    TuneGrid grid;
    grid.method = method;
    grid.k_requested = k;
    const double n = dataset_size, d = max_depth;

    switch (method) {
        case TuneMethod::None:
            grid.values = {0.0};
            break;
        case TuneMethod::Depth: {
            if (max_depth + 1 <= k) {
                for (int v = 0; v <= max_depth; ++v) grid.values.push_back(v);
            } else {
                std::vector<double> lin;
                for (int i = 0; i < k; ++i)
                    lin.push_back(static_cast<double>(i) * max_depth / (k - 1));
                grid.values = round_to_ints(lin);
            }
            break;
        }
        case TuneMethod::Size: {
            int hi = (1 << max_depth) - 1;
            grid.values = round_to_ints(logspace(1.0, hi, k - 1));
            grid.values.push_back(0.0);
            grid.values.push_back(hi);
            break;
        }
        case TuneMethod::ComplexityCost: {
            double lo = 1.0 / (n * d), hi = 0.05;
            if (hi < lo) grid.values = {lo};
            else grid.values = apply_min_step(logspace(lo, hi, k - 1), lo);
            grid.values.push_back(0.0);
            break;
        }
        case TuneMethod::MinSupport: {
            double lo = 1.0 / n, hi = 1.0 - majority_fraction;
            std::vector<double> fracs =
                hi < lo ? std::vector<double>{lo} : apply_min_step(logspace(lo, hi, k), lo);
            for (double f : fracs)
                grid.values.push_back(std::max<double>(1.0, std::llround(f * n)));
            grid.values = round_to_ints(grid.values);
            break;
        }
        case TuneMethod::QuestionLength: {
            double lo = 1.0 / (n * d), hi = 0.1;
            if (hi < lo) grid.values = {lo};
            else grid.values = apply_min_step(logspace(lo, hi, k - 1), lo);
            grid.values.push_back(0.0);
            break;
        }
        case TuneMethod::Smoothing: {
            double lo = 1.0 / d, hi = 0.05 * n;
            if (hi < lo) grid.values = {lo};
            else grid.values = apply_min_step(logspace(lo, hi, k - 1), lo);
            grid.values.push_back(0.0);
            break;
        }
    }
    dedup_sorted(grid.values);
    return grid;
}

namespace {

// True when `a` regularizes harder than `b`.
bool more_regularized(TuneMethod m, double a, double b) {
    switch (m) {
        case TuneMethod::Depth:
        case TuneMethod::Size:
            return a < b;
        default:
            return a > b;
    }
}

struct Variant {
    SolveLimits limits;
    Penalties pen;
    ObjectiveKind kind;
    ObjectiveParams params;
};

Variant build_variant(TuneMethod method, double v, ObjectiveKind kind,
                      const ObjectiveParams& params, int max_depth, int train_n, int full_n) {
    Variant var;
    var.limits = SolveLimits{max_depth, (1 << max_depth) - 1};
    var.kind = kind;
    var.params = params;
    switch (method) {
        case TuneMethod::None:
            break;
        case TuneMethod::Depth: {
            int depth = static_cast<int>(v);
            var.limits = SolveLimits{depth, depth < 30 ? (1 << depth) - 1 : 0};
            break;
        }
        case TuneMethod::Size:
            var.limits.max_branching = static_cast<int>(v);
            break;
        case TuneMethod::ComplexityCost:
            var.pen.lambda_cost = v;
            break;
        case TuneMethod::MinSupport: {
            // Grid counts refer to the full data; scale as a fraction so the
            // constraint means the same thing on a smaller CV-train split.
            double frac = v / full_n;
            var.pen.min_support = std::max(1, static_cast<int>(std::llround(frac * train_n)));
            break;
        }
        case TuneMethod::QuestionLength:
            var.pen.omega_cost = v;
            break;
        case TuneMethod::Smoothing:
            var.kind = ObjectiveKind::SmoothedAccuracy;
            var.params.x = v;
            break;
    }
    return var;
}

} // namespace

TuneResult tune(const BinaryDataset& d, ObjectiveKind kind, const ObjectiveParams& params,
                TuneMethod method, int k, int max_depth, std::uint64_t seed, int jobs,
                const SolveOptions& opts) {
    TuneResult result;
    result.method = method;

    if (method == TuneMethod::None) {
        Variant var = build_variant(method, 0.0, kind, params, max_depth, d.instance_count,
                                    d.instance_count);
        result.final = solve(d, var.kind, var.params, var.limits, var.pen, opts);
        result.chosen_setting = 0.0;
        result.solver_calls = 1;
        return result;
    }

    TuneGrid grid = make_grid(method, k, d.instance_count, d.majority_fraction(), max_depth);
    int folds_n = fold_count(d.instance_count);
    auto folds = stratified_kfold(d, folds_n, seed);

    std::vector<BinaryDataset> train_sets, val_sets;
    for (const auto& [tr, va] : folds) {
        train_sets.push_back(subset_dataset(d, tr));
        val_sets.push_back(subset_dataset(d, va));
    }

    const int S = static_cast<int>(grid.values.size());
    result.table.assign(static_cast<std::size_t>(S) * folds_n, TuneRow{});
    run_indexed_jobs(S * folds_n, jobs, [&](int idx) {
        int s = idx / folds_n;
        int f = idx % folds_n;
        TuneRow& row = result.table[idx];
        row.setting = grid.values[s];
        row.fold = f;
        const BinaryDataset& train = train_sets[f];
        Variant var = build_variant(method, grid.values[s], kind, params, max_depth,
                                    train.instance_count, d.instance_count);
        try {
            Solution sol = solve(train, var.kind, var.params, var.limits, var.pen, opts);
            row.val_accuracy = accuracy(sol.tree, val_sets[f]);
        } catch (const std::exception&) {
            row.failed = true;
        }
    });
    result.solver_calls = static_cast<std::uint64_t>(S) * folds_n;

    double best_mean = -std::numeric_limits<double>::infinity();
    double best_setting = 0.0;
    bool any = false;
    for (int s = 0; s < S; ++s) {
        double mean = 0.0;
        bool failed = false;
        for (int f = 0; f < folds_n; ++f) {
            const TuneRow& row = result.table[s * folds_n + f];
            if (row.failed) { failed = true; break; }
            mean += row.val_accuracy;
        }
        if (failed) continue;  // setting skipped, rows record the failure
        mean /= folds_n;
        bool take = !any || mean > best_mean + kTieTol ||
                    (mean >= best_mean - kTieTol &&
                     more_regularized(method, grid.values[s], best_setting));
        if (take) {
            any = true;
            best_mean = mean;
            best_setting = grid.values[s];
        }
    }
    if (!any) throw std::runtime_error("every grid setting failed; nothing to tune");

    Variant var = build_variant(method, best_setting, kind, params, max_depth, d.instance_count,
                                d.instance_count);
    result.final = solve(d, var.kind, var.params, var.limits, var.pen, opts);
    result.solver_calls += 1;
    result.chosen_setting = best_setting;
    return result;
}

} // namespace treebench
