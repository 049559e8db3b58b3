#include "treebench/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace treebench {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLnPi = 1.1447298858494002;

void check_stats(const LeafStats& s) {
    if (s.n < 0 || s.e < 0 || s.e > s.n)
        throw std::invalid_argument("leaf stats out of range: n=" + std::to_string(s.n) +
                                    " e=" + std::to_string(s.e));
}

double xlogx(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

} // namespace

double log_beta(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("log_beta requires positive arguments");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_choose(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_choose: k out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double inverse_normal_cdf(double p) {
    // Acklam's rational approximation, relative error below 1.15e-9.
    if (p <= 0.0 || p >= 1.0)
        throw std::invalid_argument("inverse_normal_cdf requires p in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

ConcavityClass concavity_class(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Gini:
        case ObjectiveKind::SqrtGini:
        case ObjectiveKind::Entropy:
        case ObjectiveKind::MdlQuinlan:
        case ObjectiveKind::MdlMehta:
        case ObjectiveKind::Bayes:
            return ConcavityClass::StrictlyConcave;
        case ObjectiveKind::Accuracy:
        case ObjectiveKind::MinError:
        case ObjectiveKind::BinomPessimistic:
        case ObjectiveKind::MLoss:
        case ObjectiveKind::LLoss:
        case ObjectiveKind::SmoothedAccuracy:
            return ConcavityClass::NonConcave;
    }
    throw std::invalid_argument("unknown objective kind");
}

std::string objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Accuracy: return "accuracy";
        case ObjectiveKind::Gini: return "gini";
        case ObjectiveKind::SqrtGini: return "sqrt-gini";
        case ObjectiveKind::Entropy: return "entropy";
        case ObjectiveKind::MinError: return "min-error";
        case ObjectiveKind::BinomPessimistic: return "binom";
        case ObjectiveKind::MdlQuinlan: return "mdl-quinlan";
        case ObjectiveKind::MdlMehta: return "mdl-mehta";
        case ObjectiveKind::Bayes: return "bayes";
        case ObjectiveKind::MLoss: return "m-loss";
        case ObjectiveKind::LLoss: return "l-loss";
        case ObjectiveKind::SmoothedAccuracy: return "smoothed";
    }
    throw std::invalid_argument("unknown objective kind");
}

ObjectiveKind objective_from_name(const std::string& name) {
    for (int i = 0; i < kObjectiveKindCount; ++i) {
        auto kind = static_cast<ObjectiveKind>(i);
        if (objective_name(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown objective name: " + name);
}

LeafObjective::LeafObjective(ObjectiveKind kind, const ObjectiveParams& params)
    : kind_(kind), params_(params) {
    if (kind == ObjectiveKind::BinomPessimistic) {
        if (!(params.alpha > 0.0 && params.alpha < 1.0))
            throw std::invalid_argument("binom requires 0 < alpha < 1");
        double z = inverse_normal_cdf(1.0 - params.alpha);
        z_sq_ = z * z;
        ln_alpha_ = std::log(params.alpha);
    } else if (kind == ObjectiveKind::Bayes) {
        if (params.rho0 <= 0.0 || params.rho1 <= 0.0)
            throw std::invalid_argument("bayes requires rho0, rho1 > 0");
        log_beta_prior_ = log_beta(params.rho0, params.rho1);
    } else if (kind == ObjectiveKind::SmoothedAccuracy) {
        if (params.x < 0.0)
            throw std::invalid_argument("smoothing count x must be >= 0");
    }
}

double LeafObjective::operator()(int n, int e) const {
    check_stats({n, e});
    if (n == 0) return 0.0;
    const double nd = n, ed = e;
    switch (kind_) {
        case ObjectiveKind::Accuracy:
            return ed;
        case ObjectiveKind::Gini:
            // n (1 - p0^2 - p1^2) = 2 e (n - e) / n, the cancellation-free form.
            return 2.0 * ed * (nd - ed) / nd;
        case ObjectiveKind::SqrtGini:
            return std::sqrt(2.0 * ed * (nd - ed));
        case ObjectiveKind::Entropy: {
            double p0 = ed / nd, p1 = (nd - ed) / nd;
            return -(nd / 2.0) * (xlogx(p0) + xlogx(p1));
        }
        case ObjectiveKind::MinError:
            return nd * (ed + 1.0) / (nd + 2.0);
        case ObjectiveKind::BinomPessimistic: {
            if (e == 0) return nd * (1.0 - std::exp(ln_alpha_ / nd));
            if (e == n) return ed;
            double ep = ed + 0.5;
            double num = ep + z_sq_ / 2.0 +
                         std::sqrt(z_sq_ * (ep * (1.0 - ep / nd) + z_sq_ / 4.0));
            return num / (nd + z_sq_) * nd;
        }
        case ObjectiveKind::MdlQuinlan: {
            double b = std::floor((nd + 1.0) / 2.0);
            double bound = params_.mdl_quinlan_table1_base ? std::log2(b + 1.0)
                                                           : std::log(b + 1.0);
            return bound + log_choose(n, e);
        }
        case ObjectiveKind::MdlMehta: {
            double v = 0.5 * std::log(nd / 2.0) + kLnPi;
            if (e > 0) v += ed * std::log(nd / ed);
            if (n - e > 0) v += (nd - ed) * std::log(nd / (nd - ed));
            return v;
        }
        case ObjectiveKind::Bayes:
            // The Appendix-A expression is the Beta-marginal likelihood ratio;
            // Table 1's values match its negative log, which is what we use.
            return -(log_beta(ed + params_.rho0, nd - ed + params_.rho1) - log_beta_prior_);
        case ObjectiveKind::MLoss:
            return nd * (1.0 / (1.0 - ed / nd) - 1.0);
        case ObjectiveKind::LLoss: {
            double r = ed / nd;
            return nd * (1.0 / std::sqrt(1.0 - r * r) - 1.0);
        }
        case ObjectiveKind::SmoothedAccuracy:
            return nd * (ed + params_.x) / (nd + params_.class_count * params_.x);
    }
    throw std::invalid_argument("unknown objective kind");
}

double leaf_value(ObjectiveKind kind, const ObjectiveParams& params, const LeafStats& stats) {
    return LeafObjective(kind, params)(stats.n, stats.e);
}

} // namespace treebench
