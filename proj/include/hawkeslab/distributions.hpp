#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "hawkeslab/rng.hpp"

namespace hawkeslab {

struct ParetoParams {
    double alpha;  // tail index in (0, 1]
    double x_m;    // scale > 0, left support endpoint
};
struct ExponentialParams {
    double rate;
};
struct DeterministicParams {
    double a;
};
struct UniformParams {
    double a, b;  // 0 <= a < b
};

/// Parametric displacement distribution on [0, inf) with F(0) = 0.
///
/// Pareto carries the heavy-tail regime: 1 - F(x) = x_m^alpha * x^-alpha on
/// [x_m, inf). Several tail normalizations coexist in the literature and all
/// are exposed rather than picking one:
///   tail_scale()       = x_m^alpha, the plain coefficient in
///                        1 - F(x) ~ tail_scale * x^-alpha;
///   tail_ell_laplace() = x_m^alpha * Gamma(1-alpha), the constant ell with
///                        1 - Fhat(s) ~ s^alpha * ell as s -> 0, equivalently
///                        1 - F(x) ~ ell / (x^alpha * Gamma(1-alpha));
///   tail_ell_gamma1p() = x_m^alpha * Gamma(1+alpha), the constant ell in the
///                        alternative convention
///                        1 - F(x) ~ ell / (x^alpha * Gamma(1+alpha)).
/// The renewal calculus keys its rates to the Laplace convention; see
/// TailSpec. Exponential, deterministic and uniform are finite-mean controls.
class DisplacementSpec {
  public:
    using Params = std::variant<ParetoParams, ExponentialParams, DeterministicParams, UniformParams>;

    static DisplacementSpec pareto(double alpha, double x_m, std::string label = "");
    static DisplacementSpec exponential(double rate, std::string label = "");
    static DisplacementSpec deterministic(double a, std::string label = "");
    static DisplacementSpec uniform(double a, double b, std::string label = "");

    double cdf(double x) const;
    double sample(RngStream& stream) const;

    bool has_density() const;
    /// Density f(x); 0 outside the support. Throws NO_DENSITY for the
    /// deterministic family.
    double density(double x) const;
    /// sup of f over [lo, hi]; 0 when the interval misses the support.
    double density_sup(double lo, double hi) const;

    /// mu(c) = E[X 1_{X <= c}], closed form per family.
    double truncated_mean(double c) const;
    /// Generalized inverse inf{c >= 0 : mu(c) >= y}; throws UNREACHABLE_LEVEL
    /// when y exceeds the total mean of a finite-mean family.
    double truncated_mean_inverse(double y) const;
    /// c(m) = mu^{-1}((1-m)^{-1}); the truncation level giving immigrant
    /// interarrival mean (1-m)^{-1}.
    double truncation_for_branching(double m) const;

    struct TailDensityConstants {
        double limit;  // lim f(x) x^{1+alpha}
        double sup;    // sup f(x) x^{1+alpha}
        double alpha;
    };
    /// Constants of the regular-variation condition on the density; empty for
    /// light-tailed families (the limit is 0 there, outside (0, inf)).
    std::optional<TailDensityConstants> tail_density_constants() const;

    /// Total mean; +inf for pareto with alpha <= 1.
    double mean() const;
    /// Left endpoint of the support.
    double support_left() const;
    /// Right endpoint of the support, +inf when unbounded.
    double support_right() const;

    double tail_scale() const;        // pareto only: x_m^alpha
    double tail_ell_laplace() const;  // pareto only: x_m^alpha * Gamma(1-alpha), alpha < 1
    double tail_ell_gamma1p() const;  // pareto only: x_m^alpha * Gamma(1+alpha)
    double tail_index() const;        // pareto only: alpha

    const Params& params() const { return params_; }
    const std::string& label() const { return label_; }

    /// Flat key-value form, e.g. "family=pareto alpha=0.5 x_m=1".
    std::string to_string() const;
    static DisplacementSpec parse(std::string_view text);

  private:
    DisplacementSpec(Params p, std::string label) : params_(std::move(p)), label_(std::move(label)) {}

    Params params_;
    std::string label_;
};

/// Law of X 1_{X <= c}: mass P[X > c] sits as an atom at 0, the rest follows
/// the base law restricted to [0, c].
struct TruncatedSpec {
    DisplacementSpec base;
    double c = 0.0;

    double cdf(double x) const;
    double sample(RngStream& stream) const;
};

/// Law of X1 - X2 with X_i iid from the base spec.
struct SymmetrizedSpec {
    DisplacementSpec base;

    double sample(RngStream& stream) const {
        const double a = base.sample(stream);
        const double b = base.sample(stream);
        return a - b;
    }
};

}  // namespace hawkeslab
