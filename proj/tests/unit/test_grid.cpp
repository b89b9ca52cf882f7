#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hawkeslab/errors.hpp"
#include "hawkeslab/grid_measure.hpp"
#include "hawkeslab/renewal_calc.hpp"

using namespace hawkeslab;

TEST_SUITE_BEGIN("renewal_calc");

TEST_CASE("delta0 is the exact convolution identity") {
    const auto f = GridMeasure::from_distribution(DisplacementSpec::exponential(1.0), 0.01, 20.0);
    const auto out = convolve(GridMeasure::delta0(0.01), f);
    REQUIRE(out.k_hi() == f.k_hi());
    for (std::int64_t k = 0; k <= f.k_hi(); ++k) REQUIRE(out.site(k) == f.site(k));
    CHECK(out.atom0() == 0.0);
}

TEST_CASE("lattice deltas convolve exactly") {
    const auto d1 = GridMeasure::delta_at(0.25, 1.0);
    const auto out = convolve(d1, d1);
    CHECK(out.site(8) == 1.0);  // position 2.0
    CHECK(out.total_mass() == 1.0);
    CHECK(out.interval_mass(1.9, 2.0) == 1.0);
}

TEST_CASE("convolution is exactly commutative and associative to rounding") {
    const auto a = GridMeasure::from_distribution(DisplacementSpec::pareto(0.5, 1.0), 0.05, 30.0);
    const auto b = GridMeasure::from_distribution(DisplacementSpec::exponential(0.7), 0.05, 30.0);
    const auto c = GridMeasure::from_distribution(DisplacementSpec::uniform(0.0, 2.0), 0.05, 30.0);

    const auto ab = convolve(a, b);
    const auto ba = convolve(b, a);
    REQUIRE(ab.k_hi() == ba.k_hi());
    for (std::int64_t k = ab.k_lo(); k <= ab.k_hi(); ++k) REQUIRE(ab.site(k) == ba.site(k));

    const GridRange range{0.0, 30.0};
    const auto ab_c = convolve(convolve(a, b, range), c, range);
    const auto a_bc = convolve(a, convolve(b, c, range), range);
    for (std::int64_t k = 0; k <= ab_c.k_hi(); ++k)
        REQUIRE(ab_c.site(k) == doctest::Approx(a_bc.site(k)).epsilon(1e-10));
}

TEST_CASE("convolution mass balance is exact") {
    const auto a = GridMeasure::from_distribution(DisplacementSpec::pareto(0.4, 1.0), 0.1, 50.0);
    const auto b = GridMeasure::from_distribution(DisplacementSpec::exponential(0.5), 0.1, 50.0);
    const auto clipped = convolve(a, b, GridRange{0.0, 50.0});
    const auto full = convolve(a, b);
    CHECK(full.total_mass() == doctest::Approx(a.total_mass() * b.total_mass()).epsilon(1e-12));
    const double dropped = full.total_mass() - clipped.total_mass();
    CHECK(dropped >= 0.0);
    CHECK(clipped.truncated_mass() >= dropped - 1e-12);
}

TEST_CASE("step mismatch is rejected") {
    const auto a = GridMeasure::delta_at(0.25, 1.0);
    const auto b = GridMeasure::delta_at(0.5, 1.0);
    CHECK_THROWS_AS((void)convolve(a, b), LabError);
}

TEST_CASE("renewal function of deterministic steps counts lattice points") {
    const auto f = GridMeasure::delta_at(0.25, 1.0);
    const auto u = renewal_function(f, 10.0);
    for (const double x : {0.0, 0.5, 1.0, 2.5, 7.0, 10.0})
        CHECK(u.cumulative_from_zero(x) == doctest::Approx(std::floor(x) + 1.0).epsilon(1e-12));
}

TEST_CASE("renewal function of exponential interarrivals is 1 + x") {
    const auto f =
        GridMeasure::from_distribution(DisplacementSpec::exponential(1.0), 0.01, 50.0);
    const auto u = renewal_function(f, 50.0);
    double worst = 0.0;
    for (double x = 0.0; x <= 50.0; x += 0.5)
        worst = std::max(worst, std::abs(u.cumulative_from_zero(x) - (1.0 + x)));
    CHECK(worst <= 0.05);
}

TEST_CASE("doubling agrees with direct forward substitution") {
    for (const auto& spec : {DisplacementSpec::pareto(0.7, 0.9), DisplacementSpec::exponential(1.0),
                             DisplacementSpec::uniform(0.0, 2.0)}) {
        CAPTURE(spec.to_string());
        const auto f = GridMeasure::from_distribution(spec, 0.05, 100.0);
        const auto fast = renewal_function(f, 100.0);
        const auto direct = renewal_function_direct(f, 100.0);
        for (std::int64_t k = 0; k <= fast.k_hi(); ++k)
            REQUIRE(fast.site(k) == doctest::Approx(direct.site(k)).epsilon(1e-9));
    }
}

TEST_CASE("renewal equation residual is at rounding level") {
    const auto f = GridMeasure::from_distribution(DisplacementSpec::pareto(0.4, 1.0), 0.02, 80.0);
    const auto u = renewal_function(f, 80.0);
    const auto fu = convolve(f, u, GridRange{0.0, 80.0});
    // U - delta0 - F*U should vanish cell-wise
    CHECK(u.atom0() == 1.0);
    for (std::int64_t k = 0; k <= u.k_hi(); ++k)
        REQUIRE(u.site(k) - fu.site(k) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("heavy-tail renewal follows the Karamata form") {
    const auto spec = DisplacementSpec::pareto(0.4, 1.0);
    const auto f = GridMeasure::from_distribution(spec, 0.01, 1e4);
    const auto u = renewal_function(f, 1e4);
    const double u2 = u.cumulative_from_zero(1e2);
    const double u4 = u.cumulative_from_zero(1e4);
    const double slope = (std::log(u4) - std::log(u2)) / (std::log(1e4) - std::log(1e2));
    CHECK(slope == doctest::Approx(0.4).epsilon(0.05));  // 0.4 +/- 0.02
    const double karamata = std::pow(1e4, 0.4) / (spec.tail_ell_laplace() * std::tgamma(1.4));
    CHECK(u4 == doctest::Approx(karamata).epsilon(0.10));
}

TEST_CASE("laplace transform basics") {
    CHECK(laplace(GridMeasure::delta0(0.01), 0.5) == 1.0);
    CHECK(laplace(GridMeasure::delta0(0.01), 7.0) == 1.0);
    CHECK(laplace(GridMeasure::delta_at(0.25, 1.0), std::log(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("laplace tail asymptotics and the renewal identity") {
    const auto spec = DisplacementSpec::pareto(0.4, 1.0);
    const double x_max = 2e4, h = 0.01;
    const auto f = GridMeasure::from_distribution(spec, h, x_max);
    const double ell = spec.tail_ell_laplace();
    for (const double s : {1e-1, 1e-2, 1e-3}) {
        // 1 - Fhat(s) ~ s^alpha * ell; grid truncation caps validity near s ~ 1/x_max
        const double ratio = (1.0 - laplace(f, s)) / (std::pow(s, 0.4) * ell);
        CAPTURE(s);
        CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));
    }
    const auto u = renewal_function(f, x_max);
    for (const double s : {1e-1, 1e-2}) {
        const double identity = laplace(u, s) * (1.0 - laplace(f, s));
        CHECK(identity == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("two-index mean measure reaches its renewal rate") {
    const double h = 0.02, x_max = 1e4;
    auto build = [&](double alpha, double ell) {
        return GridMeasure::from_distribution(pareto_for_tail(TailSpec{alpha, ell}), h, x_max);
    };
    const auto ub = two_index_mean(build(0.3, 1.0), build(0.7, 1.0), x_max);
    CHECK(ub.cumulative_from_zero(x_max) / x_max == doctest::Approx(1.0).epsilon(0.10));

    const auto ub_sym = two_index_mean(build(0.5, 1.0), build(0.5, 1.0), x_max);
    CHECK(ub_sym.cumulative_from_zero(x_max) / x_max == doctest::Approx(1.0).epsilon(0.10));

    // alpha1 + alpha2 < 1: rate decays, log-log slope is alpha1 + alpha2
    const auto ub_sub = two_index_mean(build(0.3, 1.0), build(0.5, 1.0), x_max);
    const double v2 = ub_sub.cumulative_from_zero(1e2);
    const double v4 = ub_sub.cumulative_from_zero(1e4);
    const double slope = (std::log(v4) - std::log(v2)) / std::log(1e2);
    CHECK(slope == doctest::Approx(0.8).epsilon(0.03));
    const double karamata = std::pow(x_max, 0.8) / std::tgamma(1.8);
    CHECK(v4 == doctest::Approx(karamata).epsilon(0.12));
}

TEST_CASE("palm mean measure: symmetry, atom, double-sum oracle") {
    const auto spec = pareto_for_tail(TailSpec{0.3, 1.0});
    const double h = 0.01, x_max = 500.0;
    const auto f = GridMeasure::from_distribution(spec, h, x_max);
    const auto u0 = palm_mean_measure(f, x_max);

    CHECK(u0.atom0() == 1.0);
    for (std::int64_t k = 1; k <= u0.k_hi(); ++k) REQUIRE(u0.site(k) == u0.site(-k));

    // truncated double sum of reflected and forward convolution powers:
    // sum_{g,g'<=G} F-^{g*} * F^{g'*} = U-^(G) * U^(G)
    const int g_max = 50;
    const GridRange range{-x_max, x_max};
    GridMeasure u_trunc = GridMeasure::zero(h, 0.0, x_max);
    u_trunc.set_atom0(1.0);
    GridMeasure power = convolve(f, GridMeasure::delta0(h), GridRange{0.0, x_max});
    for (int g = 1; g <= g_max; ++g) {
        u_trunc.add(power);
        power = convolve(power, f, GridRange{0.0, x_max});
    }
    const auto oracle = convolve(u_trunc.reflected(), u_trunc, range);
    for (double a = -10.0; a < 10.0; a += 1.0) {
        const double got = u0.interval_mass(a, a + 1.0);
        const double want = oracle.interval_mass(a, a + 1.0);
        CAPTURE(a);
        CHECK(got == doctest::Approx(want).epsilon(0.02));
    }
}

TEST_CASE("palm refuses a recurrent step law") {
    const auto f = GridMeasure::from_distribution(DisplacementSpec::exponential(1.0), 0.05, 60.0);
    CHECK_THROWS_AS((void)palm_mean_measure(f, 60.0), LabError);
    try {
        (void)palm_mean_measure(f, 60.0);
    } catch (const LabError& e) {
        CHECK(e.code() == ErrorCode::divergent);
    }
}

TEST_CASE("local finiteness scan classifies the tail indices") {
    ScanOptions opts;
    opts.ranges = {50.0, 500.0, 5000.0};
    opts.h = 0.02;
    const auto entries = palm_local_finiteness_scan({0.3, 0.5, 0.7}, opts);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].verdict == FinitenessVerdict::bounded);
    CHECK(entries[1].verdict == FinitenessVerdict::inconclusive);
    CHECK(entries[2].verdict == FinitenessVerdict::growing);
    for (const auto& e : entries) {
        REQUIRE(e.values.size() == 3);
        CHECK(e.values[0] <= e.values[1] + 1e-9);
        CHECK(e.values[1] <= e.values[2] + 1e-9);
    }
}

TEST_CASE("csv export carries the metadata header") {
    const auto f = GridMeasure::from_distribution(DisplacementSpec::pareto(0.5, 1.0), 0.5, 5.0);
    std::ostringstream out;
    f.write_csv(out);
    const std::string text = out.str();
    CHECK(text.find("# h=0.5") != std::string::npos);
    CHECK(text.find("# truncated_mass=") != std::string::npos);
    CHECK(text.find("x,mass") != std::string::npos);
}

TEST_SUITE_END();
