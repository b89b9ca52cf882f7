#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hawkeslab/distributions.hpp"
#include "hawkeslab/errors.hpp"
#include "hawkeslab/stats.hpp"

using namespace hawkeslab;

namespace {

// Simpson quadrature of x f(x) over [a, b]; the independent check for the
// closed-form truncated means.
double quad_mean(const DisplacementSpec& spec, double a, double b) {
    const int n = 20'000;  // even
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * x * spec.density(x);
    }
    return acc * h / 3.0;
}

std::vector<double> sample_sorted(const DisplacementSpec& spec, std::size_t n, std::uint64_t seed) {
    RngStream s(seed, 0, 0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = spec.sample(s);
    std::sort(xs.begin(), xs.end());
    return xs;
}

}  // namespace

TEST_SUITE_BEGIN("distributions");

TEST_CASE("cdf values") {
    const auto pareto = DisplacementSpec::pareto(0.5, 1.0);
    CHECK(pareto.cdf(1.0) == 0.0);  // left endpoint
    CHECK(pareto.cdf(4.0) == doctest::Approx(1.0 - std::pow(0.25, 0.5)).epsilon(1e-12));
    CHECK(pareto.cdf(4.0) == doctest::Approx(0.5));
    const auto expo = DisplacementSpec::exponential(1.0);
    CHECK(expo.cdf(1e9) == doctest::Approx(1.0));
    CHECK(expo.cdf(0.0) == 0.0);
}

TEST_CASE("cdf is monotone, right-continuous, in [0,1], with cdf(0) = 0") {
    const std::vector<DisplacementSpec> specs = {
        DisplacementSpec::pareto(0.5, 1.0), DisplacementSpec::pareto(1.0, 2.0),
        DisplacementSpec::exponential(2.0), DisplacementSpec::deterministic(1.5),
        DisplacementSpec::uniform(0.5, 2.0)};
    for (const auto& spec : specs) {
        CAPTURE(spec.to_string());
        CHECK(spec.cdf(0.0) == 0.0);
        double prev = -1.0;
        for (double x = -1.0; x < 20.0; x += 0.01) {
            const double f = spec.cdf(x);
            REQUIRE(f >= prev);
            REQUIRE(f >= 0.0);
            REQUIRE(f <= 1.0);
            REQUIRE(spec.cdf(x + 1e-12) == doctest::Approx(f).epsilon(1e-6));
            prev = f;
        }
        CHECK(spec.cdf(1e12) == doctest::Approx(1.0));
    }
}

TEST_CASE("deterministic sampling is the constant") {
    const auto spec = DisplacementSpec::deterministic(1.0);
    RngStream s(1, 0, 0);
    for (int i = 0; i < 100; ++i) CHECK(spec.sample(s) == 1.0);
    const SymmetrizedSpec sym{spec};
    RngStream s2(2, 0, 0);
    for (int i = 0; i < 100; ++i) CHECK(sym.sample(s2) == 0.0);
}

TEST_CASE("exponential sample mean obeys the law of large numbers") {
    const auto spec = DisplacementSpec::exponential(1.0);
    RngStream s(3, 0, 0);
    double acc = 0.0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) acc += spec.sample(s);
    CHECK(std::abs(acc / n - 1.0) < 0.02);
}

TEST_CASE("samples match the analytic cdf (KS, 99% band)") {
    for (const auto& spec :
         {DisplacementSpec::pareto(0.5, 1.0), DisplacementSpec::pareto(0.3, 2.0),
          DisplacementSpec::exponential(1.0), DisplacementSpec::uniform(0.0, 3.0)}) {
        CAPTURE(spec.to_string());
        const auto xs = sample_sorted(spec, 100'000, 17);
        CHECK(ks_statistic(xs, [&](double x) { return spec.cdf(x); }) <= ks_band_99(xs.size()));
    }
}

TEST_CASE("truncated law: atom at zero and KS fit") {
    const TruncatedSpec trunc{DisplacementSpec::pareto(0.5, 1.0), 9.0};
    CHECK(trunc.cdf(-0.5) == 0.0);
    CHECK(trunc.cdf(0.0) == doctest::Approx(1.0 - trunc.base.cdf(9.0)));  // atom mass
    CHECK(trunc.cdf(9.0) == doctest::Approx(1.0));
    CHECK(trunc.cdf(1e99) == doctest::Approx(1.0));
    RngStream s(19, 0, 0);
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = trunc.sample(s);
    std::sort(xs.begin(), xs.end());
    CHECK(ks_statistic(xs, [&](double x) { return trunc.cdf(x); }) <= ks_band_99(xs.size()));
}

TEST_CASE("truncated mean closed forms against quadrature") {
    const auto det = DisplacementSpec::deterministic(1.0);
    CHECK(det.truncated_mean(0.5) == 0.0);
    CHECK(det.truncated_mean(2.0) == 1.0);

    const auto pareto = DisplacementSpec::pareto(0.5, 1.0);
    CHECK(pareto.truncated_mean(4.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pareto.truncated_mean(4.0) == doctest::Approx(quad_mean(pareto, 1.0, 4.0)).epsilon(1e-8));

    const auto expo = DisplacementSpec::exponential(0.7);
    CHECK(expo.truncated_mean(3.0) == doctest::Approx(quad_mean(expo, 0.0, 3.0)).epsilon(1e-8));
    const auto uni = DisplacementSpec::uniform(0.5, 2.5);
    CHECK(uni.truncated_mean(1.7) == doctest::Approx(quad_mean(uni, 0.5, 1.7)).epsilon(1e-8));
    CHECK(uni.truncated_mean(99.0) == doctest::Approx(1.5));
}

TEST_CASE("truncated mean is nondecreasing and bounded by c") {
    for (const auto& spec : {DisplacementSpec::pareto(0.4, 1.0), DisplacementSpec::exponential(1.0),
                             DisplacementSpec::uniform(0.0, 2.0)}) {
        double prev = 0.0;
        for (double c = 0.0; c < 30.0; c += 0.1) {
            const double mu = spec.truncated_mean(c);
            REQUIRE(mu >= prev);
            REQUIRE(mu <= c + 1e-12);
            prev = mu;
        }
    }
}

TEST_CASE("mu inverse: values, round trips, bracketing") {
    const auto pareto = DisplacementSpec::pareto(0.5, 1.0);
    CHECK(pareto.truncated_mean_inverse(0.0) == 0.0);
    CHECK(pareto.truncated_mean_inverse(1.0) == doctest::Approx(4.0).epsilon(1e-7));
    for (const double y : {0.5, 1.0, 2.0}) {
        const double c = pareto.truncated_mean_inverse(y);
        CHECK(pareto.truncated_mean(c) == doctest::Approx(y).epsilon(1e-6));
        const double eps = 1e-6 * std::max(1.0, c);
        CHECK(pareto.truncated_mean(c - eps) < y);
        CHECK(pareto.truncated_mean(c + eps) >= y - 1e-9);
    }
    // generalized inverse jumps through the deterministic step
    const auto det = DisplacementSpec::deterministic(2.0);
    CHECK(det.truncated_mean_inverse(1.0) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("mu inverse refuses unreachable levels") {
    CHECK_THROWS_AS((void)DisplacementSpec::exponential(1.0).truncated_mean_inverse(2.0), LabError);
    CHECK_THROWS_AS((void)DisplacementSpec::exponential(1.0).truncated_mean_inverse(1.0), LabError);
    CHECK_THROWS_AS((void)DisplacementSpec::uniform(0.0, 1.0).truncated_mean_inverse(0.75), LabError);
    CHECK(DisplacementSpec::uniform(0.0, 1.0).truncated_mean_inverse(0.5) ==
          doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("branching truncation level") {
    const auto pareto = DisplacementSpec::pareto(0.5, 1.0);
    CHECK(pareto.truncation_for_branching(0.0) == doctest::Approx(4.0).epsilon(1e-7));
    const double c50 = pareto.truncation_for_branching(0.5);
    const double c90 = pareto.truncation_for_branching(0.9);
    const double c99 = pareto.truncation_for_branching(0.99);
    CHECK(c50 < c90);
    CHECK(c90 < c99);
    // interarrival mean identity mu(c(m)) = 1/(1-m)
    for (const double m : {0.5, 0.9, 0.99})
        CHECK(pareto.truncated_mean(pareto.truncation_for_branching(m)) ==
              doctest::Approx(1.0 / (1.0 - m)).epsilon(1e-6));
}

TEST_CASE("tail density constants") {
    const auto c1 = DisplacementSpec::pareto(0.4, 1.0).tail_density_constants();
    REQUIRE(c1.has_value());
    CHECK(c1->limit == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(c1->sup == doctest::Approx(0.4).epsilon(1e-12));
    const auto c2 = DisplacementSpec::pareto(0.3, 2.0).tail_density_constants();
    REQUIRE(c2.has_value());
    CHECK(c2->limit == doctest::Approx(0.3 * std::pow(2.0, 0.3)).epsilon(1e-12));
    CHECK(!DisplacementSpec::exponential(1.0).tail_density_constants().has_value());
    CHECK(!DisplacementSpec::uniform(0.0, 1.0).tail_density_constants().has_value());
}

TEST_CASE("symmetrized samples are symmetric in distribution") {
    for (const auto& base : {DisplacementSpec::pareto(0.5, 1.0), DisplacementSpec::exponential(1.0)}) {
        const SymmetrizedSpec sym{base};
        RngStream s(23, 0, 0);
        const std::size_t n = 100'000;
        std::vector<double> xs(n);
        for (auto& x : xs) x = sym.sample(s);
        std::sort(xs.begin(), xs.end());
        const double band = ks_band_99(n);
        for (const double x : {0.5, 1.0, 2.0}) {
            const auto below = static_cast<double>(
                std::lower_bound(xs.begin(), xs.end(), -x) - xs.begin());
            const auto upto = static_cast<double>(
                std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            const double f_neg = below / static_cast<double>(n);
            const double f_pos = upto / static_cast<double>(n);
            CHECK(std::abs(f_neg + f_pos - 1.0) <= 2.0 * band);
        }
    }
}

TEST_CASE("density and its interval supremum") {
    const auto pareto = DisplacementSpec::pareto(0.4, 1.0);
    CHECK(pareto.density(0.5) == 0.0);
    CHECK(pareto.density(1.0) == doctest::Approx(0.4));
    CHECK(pareto.density_sup(-1.0, 0.5) == 0.0);
    CHECK(pareto.density_sup(-1.0, 2.0) == doctest::Approx(0.4));
    CHECK(pareto.density_sup(2.0, 3.0) == doctest::Approx(pareto.density(2.0)));
    CHECK_THROWS_AS((void)DisplacementSpec::deterministic(1.0).density(1.0), LabError);
}

TEST_CASE("serialization round trip and parse errors") {
    for (const auto& spec :
         {DisplacementSpec::pareto(0.4, 1.5), DisplacementSpec::exponential(2.0),
          DisplacementSpec::deterministic(3.0), DisplacementSpec::uniform(0.25, 1.75)}) {
        const auto back = DisplacementSpec::parse(spec.to_string());
        CHECK(back.to_string() == spec.to_string());
    }
    CHECK_THROWS_AS((void)DisplacementSpec::parse("family=cauchy x=1"), ConfigError);
    CHECK_THROWS_AS((void)DisplacementSpec::parse("alpha=0.5"), ConfigError);
    CHECK_THROWS_AS((void)DisplacementSpec::parse("family=pareto alpha=0.5"), ConfigError);
    CHECK_THROWS_AS((void)DisplacementSpec::parse("family=pareto alpha=0.5 x_m=1 bad=2"), ConfigError);
    CHECK_THROWS_AS((void)DisplacementSpec::parse("family=pareto alpha=zz x_m=1"), ConfigError);
}

TEST_CASE("both tail-constant conventions are exposed") {
    const auto spec = DisplacementSpec::pareto(0.5, 2.0);
    const double scale = std::pow(2.0, 0.5);
    CHECK(spec.tail_scale() == doctest::Approx(scale));
    CHECK(spec.tail_ell_laplace() == doctest::Approx(scale * std::tgamma(0.5)));
    CHECK(spec.tail_ell_gamma1p() == doctest::Approx(scale * std::tgamma(1.5)));
}

TEST_SUITE_END();
