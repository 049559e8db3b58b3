#pragma once

#include <string>

namespace treebench {

/// The leaf-additive training objectives. A tree's training cost is the sum
/// of f(n, e) over its leaves, where n is the number of instances reaching
/// the leaf and e the misclassifications under majority labeling.
enum class ObjectiveKind {
    Accuracy,
    Gini,
    SqrtGini,
    Entropy,
    MinError,
    BinomPessimistic,
    MdlQuinlan,
    MdlMehta,
    Bayes,
    MLoss,
    LLoss,
    SmoothedAccuracy,
};

inline constexpr int kObjectiveKindCount = 12;

enum class ConcavityClass { StrictlyConcave, NonConcave };

struct ObjectiveParams {
    double alpha = 0.25;   // confidence level for the binomial pessimistic error (C4.5 default)
    double rho0 = 2.5;     // Beta prior for the Bayes objective
    double rho1 = 2.5;
    double x = 0.0;        // Laplace smoothing count (>= 0)
    int class_count = 2;

    // Table-1 compatibility: evaluate the MDL (Quinlan) bound term in log2
    // instead of the natural log. Off by default; see leaf_value.
    bool mdl_quinlan_table1_base = false;
};

struct LeafStats {
    int n = 0;  // instances in the leaf
    int e = 0;  // misclassifications under majority labeling (e <= n - e)
};

/// Cost of one leaf under the given objective. Returns 0 for n == 0; 0*log 0
/// and 0/0 terms evaluate to zero. Throws std::invalid_argument for
/// out-of-range stats or params.
double leaf_value(ObjectiveKind kind, const ObjectiveParams& params, const LeafStats& stats);

/// ln B(a, b) for a, b > 0, via ln Gamma.
double log_beta(double a, double b);

/// ln C(n, k) without overflow.
double log_choose(int n, int k);

/// Inverse standard normal CDF, |error| < 1e-8 (rational approximation).
double inverse_normal_cdf(double p);

ConcavityClass concavity_class(ObjectiveKind kind);

/// Stable lowercase names used by the CLI and config files
/// ("accuracy", "gini", "sqrt-gini", ...).
std::string objective_name(ObjectiveKind kind);
ObjectiveKind objective_from_name(const std::string& name);

/// Precompiled objective: kind + params with derived constants resolved once,
/// for evaluation in solver inner loops.
class LeafObjective {
public:
    LeafObjective(ObjectiveKind kind, const ObjectiveParams& params);

    double operator()(int n, int e) const;

    /// Leaf cost from raw class counts: applies majority labeling (e = min
    /// of the two class counts).
    double from_counts(int n, int positives) const {
        int e = positives < n - positives ? positives : n - positives;
        return (*this)(n, e);
    }

    ObjectiveKind kind() const { return kind_; }
    const ObjectiveParams& params() const { return params_; }

private:
    ObjectiveKind kind_;
    ObjectiveParams params_;
    double z_sq_ = 0.0;        // z_alpha^2 for BinomPessimistic
    double ln_alpha_ = 0.0;
    double log_beta_prior_ = 0.0;  // ln B(rho0, rho1)
};

} // namespace treebench
