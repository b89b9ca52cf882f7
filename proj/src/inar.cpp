#include "hawkeslab/inar.hpp"

#include <cmath>
#include <numeric>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

double InarSpec::weight_sum() const { return std::accumulate(alpha.begin(), alpha.end(), 0.0); }

void InarSpec::normalize() {
    const double s = weight_sum();
    if (!(s > 0.0)) throw ConfigError("INAR weights must have positive sum");
    for (double& a : alpha) a /= s;
}

InarSpec heavy_tail_weights(std::size_t k_max, double exponent, double target_lambda) {
    if (k_max < 1) throw ConfigError("INAR needs k_max >= 1");
    InarSpec spec;
    spec.target_lambda = target_lambda;
    spec.alpha.resize(k_max);
    double s = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        spec.alpha[k - 1] = std::pow(static_cast<double>(k), -exponent);
        s += spec.alpha[k - 1];
    }
    // untruncated tail estimate sum_{k > k_max} k^-p ~ k_max^{1-p}/(p-1)
    const double tail = std::pow(static_cast<double>(k_max), 1.0 - exponent) / (exponent - 1.0);
    spec.truncated_tail = tail / (s + tail);
    for (double& a : spec.alpha) a /= s;
    return spec;
}

InarPath simulate_inar(const InarSpec& spec, std::size_t n_steps, std::size_t burnin,
                       RngStream& stream, std::uint64_t event_cap) {
    if (spec.k_max() < 1) throw ConfigError("INAR needs at least one lag weight");
    if (spec.weight_sum() > 1.0 + 1e-9)
        throw ConfigError("INAR weights must sum to at most 1");

    InarPath path;
    path.prehistory = spec.k_max();
    path.burnin = burnin;
    path.x.resize(path.prehistory + burnin + n_steps);

    for (std::size_t i = 0; i < path.prehistory; ++i)
        path.x[i] = static_cast<std::int64_t>(stream.poisson(spec.target_lambda));

    const std::size_t k_max = spec.k_max();
    for (std::size_t n = path.prehistory; n < path.x.size(); ++n) {
        std::int64_t total = 0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            const std::int64_t lag = path.x[n - k];
            if (lag == 0) continue;
            total += static_cast<std::int64_t>(
                stream.poisson(spec.alpha[k - 1] * static_cast<double>(lag)));
        }
        path.x[n] = total;
        path.total_events += static_cast<std::uint64_t>(total);
        if (path.total_events > event_cap)
            throw LabError(ErrorCode::explosion, "INAR path exceeded the event cap");
    }
    return path;
}

std::vector<double> innovations(const InarPath& path, const InarSpec& spec) {
    const std::size_t k_max = spec.k_max();
    if (path.prehistory < k_max)
        throw ConfigError("path lacks the full lag window for innovations");
    std::vector<double> u(path.forward_length());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const std::size_t n = path.prehistory + i;
        double mean = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k)
            mean += spec.alpha[k - 1] * static_cast<double>(path.x[n - k]);
        u[i] = static_cast<double>(path.x[n]) - mean;
    }
    return u;
}

ThinningReport thinning_counts_check(const InarSpec& spec, std::uint64_t replications,
                                     RngStream& stream) {
    if (spec.k_max() < 1) throw ConfigError("thinning check needs weights");
    ThinningReport report;
    report.replications = replications;

    std::vector<double> cum(spec.alpha.size());
    std::partial_sum(spec.alpha.begin(), spec.alpha.end(), cum.begin());
    const double total = cum.back();

    double s1 = 0.0, s1_sq = 0.0, s12 = 0.0, s12_sq = 0.0, s2 = 0.0;
    std::uint64_t n0 = 0, n1 = 0, n2p = 0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        const std::uint64_t k_total = stream.poisson(1.0);
        std::uint64_t xi1 = 0, xi2 = 0;
        for (std::uint64_t l = 0; l < k_total; ++l) {
            const double u = stream.uniform01() * total;
            const std::size_t idx =
                static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (idx == 0) ++xi1;
            else if (idx == 1) ++xi2;
        }
        if (k_total == 0) {
            ++report.zero_k_draws;
            if (xi1 != 0 || xi2 != 0) report.zero_k_all_zero = false;
        }
        const auto x1 = static_cast<double>(xi1);
        const auto x2 = static_cast<double>(xi2);
        s1 += x1;
        s1_sq += x1 * x1;
        s2 += x2;
        s12 += x1 * x2;
        s12_sq += x1 * x2 * x1 * x2;
        if (xi1 == 0) ++n0;
        else if (xi1 == 1) ++n1;
        else ++n2p;
    }

    const auto n = static_cast<double>(replications);
    report.mean_xi1 = s1 / n;
    const double var1 = std::max(0.0, s1_sq / n - report.mean_xi1 * report.mean_xi1);
    report.se_xi1 = std::sqrt(var1 / n);
    const double mean2 = s2 / n;
    const double mean12 = s12 / n;
    report.cov_xi1_xi2 = mean12 - report.mean_xi1 * mean2;
    const double var12 = std::max(0.0, s12_sq / n - mean12 * mean12);
    // leading-order standard error of the product moment
    report.se_cov = std::sqrt(var12 / n);

    const double a1 = spec.alpha[0];
    const double p0 = std::exp(-a1);
    const double p1 = a1 * p0;
    const double p2p = 1.0 - p0 - p1;
    auto chi_term = [&](double observed, double expected) {
        return expected > 0.0 ? (observed - expected) * (observed - expected) / expected : 0.0;
    };
    report.chi_square_xi1 = chi_term(static_cast<double>(n0), n * p0) +
                            chi_term(static_cast<double>(n1), n * p1) +
                            chi_term(static_cast<double>(n2p), n * p2p);
    return report;
}

std::vector<double> symmetrized_lattice_step(const InarSpec& spec, std::int64_t& k_min_out) {
    const auto k_max = static_cast<std::int64_t>(spec.k_max());
    k_min_out = -(k_max - 1);
    std::vector<double> p(static_cast<std::size_t>(2 * k_max - 1), 0.0);
    // p_k = sum_l alpha_l alpha_{k+l}; accumulate symmetrically so p_k == p_-k exactly
    for (std::int64_t l = 1; l <= k_max; ++l) {
        for (std::int64_t j = l; j <= k_max; ++j) {
            const double mass = spec.alpha[static_cast<std::size_t>(l - 1)] *
                                spec.alpha[static_cast<std::size_t>(j - 1)];
            const std::int64_t k = j - l;
            if (k == 0) {
                p[static_cast<std::size_t>(k_max - 1)] += mass;
            } else {
                p[static_cast<std::size_t>(k_max - 1 + k)] += mass;
                p[static_cast<std::size_t>(k_max - 1 - k)] += mass;
            }
        }
    }
    return p;
}

}  // namespace hawkeslab
