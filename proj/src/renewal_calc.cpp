#include "hawkeslab/renewal_calc.hpp"

#include <cmath>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

DisplacementSpec pareto_for_tail(const TailSpec& tail) {
    if (!(tail.alpha > 0.0 && tail.alpha < 1.0))
        throw ConfigError("tail alpha must lie in (0, 1)");
    if (!(tail.ell > 0.0)) throw ConfigError("tail ell must be > 0");
    // 1 - F(x) = x_m^alpha x^-alpha and ell = x_m^alpha Gamma(1-alpha).
    const double x_m = std::pow(tail.ell / std::tgamma(1.0 - tail.alpha), 1.0 / tail.alpha);
    return DisplacementSpec::pareto(tail.alpha, x_m);
}

namespace {

void require_one_sided(const GridMeasure& f, const char* who) {
    if (f.k_lo() != 0 || f.atom0() != 0.0)
        throw LabError(ErrorCode::config_invalid,
                       std::string(who) + " needs a one-sided grid with no atom at 0");
    if (f.total_mass() > 1.0 + 1e-9)
        throw LabError(ErrorCode::config_invalid,
                       std::string(who) + " needs a sub-probability grid");
}

GridMeasure delta0_on(double h, double x_lo, double x_hi) {
    GridMeasure g = GridMeasure::zero(h, x_lo, x_hi);
    g.set_atom0(1.0);
    return g;
}

}  // namespace

GridMeasure renewal_function(const GridMeasure& f, double x_max, const RenewalOptions& opts) {
    require_one_sided(f, "renewal_function");
    const GridRange range{0.0, x_max};
    GridMeasure u = delta0_on(f.step(), 0.0, x_max);
    GridMeasure power = convolve(f, GridMeasure::delta0(f.step()), range);
    for (int n = 0; n < opts.max_doublings; ++n) {
        const double power_mass = power.total_mass();
        if (power_mass <= opts.mass_eps) break;
        GridMeasure inc = convolve(power, u, range);
        u.add(inc);
        if (power_mass * power_mass <= opts.mass_eps) break;
        power = convolve(power, power, range);
    }
    return u;
}

GridMeasure renewal_function_direct(const GridMeasure& f, double x_max) {
    require_one_sided(f, "renewal_function_direct");
    const double h = f.step();
    const auto K = static_cast<std::int64_t>(std::llround(x_max / h));
    GridMeasure u = GridMeasure::zero(h, 0.0, x_max);
    u.set_atom0(1.0);
    const double f0 = f.site(0);
    if (f0 >= 1.0) throw LabError(ErrorCode::divergent, "renewal grid has unit mass at the origin");
    for (std::int64_t k = 0; k <= K; ++k) {
        double acc = f.site(k);  // atom term of U
        const std::int64_t j_hi = std::min<std::int64_t>(k, f.k_hi());
        for (std::int64_t j = 1; j <= j_hi; ++j) acc += f.site(j) * u.site(k - j);
        u.set_site(k, acc / (1.0 - f0));
    }
    return u;
}

GridMeasure two_index_mean(const GridMeasure& f1, const GridMeasure& f2, double x_max,
                           const RenewalOptions& opts) {
    if (f1.step() != f2.step())
        throw LabError(ErrorCode::step_mismatch, "two_index_mean grids have different steps");
    const GridMeasure u1 = renewal_function(f1, x_max, opts);
    const GridMeasure u2 = renewal_function(f2, x_max, opts);
    return convolve(u1, u2, GridRange{0.0, x_max});
}

double laplace(const GridMeasure& g, double s) {
    if (!(s > 0.0)) throw LabError(ErrorCode::config_invalid, "laplace needs s > 0");
    double acc = g.atom0();
    for (std::int64_t k = g.k_lo(); k <= g.k_hi(); ++k) {
        const double m = g.site(k);
        if (m != 0.0) acc += m * std::exp(-s * g.position(k));
    }
    return acc;
}

GridMeasure palm_mean_measure(const GridMeasure& f, double x_max, const PalmOptions& opts) {
    require_one_sided(f, "palm_mean_measure");
    const double h = f.step();
    const GridRange range{-x_max, x_max};

    const GridMeasure f_minus = f.reflected();
    GridMeasure f_sym = convolve(f_minus, f, range);
    f_sym.mirror_symmetrize();

    // U_sym = sum_g f_sym^{g*} by doubling. Transient step laws drain the
    // grid range within the doubling budget (the residual power's mass
    // collapses); a recurrent law keeps adding visits, so the increment never
    // meets the Cauchy tolerance and the sum is refused as DIVERGENT.
    GridMeasure u_sym = delta0_on(h, -x_max, x_max);
    GridMeasure power = f_sym;
    bool converged = false;
    for (int n = 0; n < opts.max_doublings; ++n) {
        if (power.total_mass() <= opts.mass_eps) {
            converged = true;
            break;
        }
        GridMeasure inc = convolve(power, u_sym, range);
        const double inc_mass = inc.total_mass();
        u_sym.add(inc);
        if (inc_mass <= opts.cauchy_tol * std::max(1.0, u_sym.total_mass())) {
            converged = true;
            break;
        }
        power = convolve(power, power, range);
        power.mirror_symmetrize();
    }
    if (!converged)
        throw LabError(ErrorCode::divergent,
                       "symmetrized occupation sum failed the Cauchy criterion");
    u_sym.mirror_symmetrize();

    const GridMeasure u = renewal_function(f, x_max, RenewalOptions{opts.mass_eps, opts.max_doublings});

    // W = U + U_- - delta_0 on the two-sided grid.
    GridMeasure w = GridMeasure::zero(h, -x_max, x_max);
    for (std::int64_t k = 0; k <= u.k_hi(); ++k) {
        const double m = u.site(k);
        if (k <= w.k_hi()) w.add_site(k, m);
        if (-k >= w.k_lo()) w.add_site(-k, m);
    }
    w.set_atom0(1.0);  // 1 + 1 - 1 from the two renewal atoms and -delta_0

    GridMeasure u0 = convolve(u_sym, w, range);
    u0.mirror_symmetrize();
    return u0;
}

const char* to_string(FinitenessVerdict v) {
    switch (v) {
        case FinitenessVerdict::bounded: return "bounded";
        case FinitenessVerdict::growing: return "growing";
        case FinitenessVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<ScanEntry> palm_local_finiteness_scan(const std::vector<double>& alphas,
                                                  const ScanOptions& opts) {
    if (opts.ranges.size() < 3) throw ConfigError("scan needs at least three ranges");
    std::vector<ScanEntry> out;
    out.reserve(alphas.size());
    for (const double alpha : alphas) {
        const DisplacementSpec spec = pareto_for_tail(TailSpec{alpha, opts.ell});
        ScanEntry entry{alpha, FinitenessVerdict::inconclusive, {}};
        for (const double r : opts.ranges) {
            const GridMeasure f = GridMeasure::from_distribution(spec, opts.h, r);
            const GridMeasure u0 = palm_mean_measure(f, r);
            entry.values.push_back(u0.cumulative_from_zero(opts.probe_hi));
        }
        const std::size_t n = entry.values.size();
        const double d1 = entry.values[n - 2] - entry.values[n - 3];
        const double d2 = entry.values[n - 1] - entry.values[n - 2];
        if (d2 <= opts.abs_tol * std::max(1.0, entry.values[n - 1])) {
            entry.verdict = FinitenessVerdict::bounded;
        } else if (d1 > 0.0) {
            const double ratio = d2 / d1;
            if (ratio < opts.ratio_lo) entry.verdict = FinitenessVerdict::bounded;
            else if (ratio > opts.ratio_hi) entry.verdict = FinitenessVerdict::growing;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace hawkeslab
