#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hawkeslab/rng.hpp"
#include "hawkeslab/stats.hpp"

using namespace hawkeslab;

TEST_SUITE_BEGIN("rng");

TEST_CASE("philox known-answer vectors") {
    // Random123 kat_vectors, philox4x32-10
    auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(r == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(r == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("identical addresses reproduce the stream") {
    RngStream a(42, 7, 3), b(42, 7, 3);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u32() == b.next_u32());
}

TEST_CASE("different seeds differ, same replicate") {
    RngStream a(1, 0, 0), b(2, 0, 0);
    int agree = 0;
    for (int i = 0; i < 64; ++i) agree += a.next_u32() == b.next_u32() ? 1 : 0;
    CHECK(agree <= 2);
}

TEST_CASE("replicate streams look independent") {
    RngStream a(2024, 1, 0), b(2024, 2, 0);
    const int n = 10'000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform01(), y = b.uniform01();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double ma = sa / n, mb = sb / n;
    const double rho =
        (sab / n - ma * mb) / std::sqrt((saa / n - ma * ma) * (sbb / n - mb * mb));
    CHECK(std::abs(rho) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform01 stays in [0,1) and passes a KS check") {
    RngStream s(7, 0, 0);
    std::vector<double> xs(20'000);
    for (auto& x : xs) {
        x = s.uniform01();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
    std::sort(xs.begin(), xs.end());
    CHECK(ks_statistic(xs, [](double x) { return x; }) <= ks_band_99(xs.size()));
}

namespace {

void check_poisson_fit(double mean, std::uint64_t seed) {
    RngStream s(seed, 0, 0);
    const int n = 200'000;
    const int bins = 80;
    std::vector<std::uint64_t> observed(bins, 0);
    for (int i = 0; i < n; ++i)
        ++observed[std::min<std::uint64_t>(s.poisson(mean), bins - 1)];
    std::vector<double> expected(bins, 0.0);
    double pmf = std::exp(-mean), cum = 0.0;
    for (int k = 0; k + 1 < bins; ++k) {
        expected[k] = pmf * n;
        cum += pmf;
        pmf *= mean / (k + 1);
    }
    expected[bins - 1] = (1.0 - cum) * n;
    // merge cells so the statistic has at most ~12 degrees of freedom
    const double cell_mass = static_cast<double>(n) / 12.0;
    double stat = 0.0, obs_acc = 0.0, exp_acc = 0.0;
    int cells = 0;
    for (int k = 0; k < bins; ++k) {
        obs_acc += static_cast<double>(observed[k]);
        exp_acc += expected[k];
        if (exp_acc >= cell_mass) {
            stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
            ++cells;
            obs_acc = exp_acc = 0.0;
        }
    }
    if (exp_acc > 0.0) {
        stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / std::max(exp_acc, 1.0);
        ++cells;
    }
    CAPTURE(mean);
    REQUIRE(cells >= 2);
    CHECK(stat < chi_square_99(std::min(cells - 1, 20)));
}

}  // namespace

TEST_CASE("poisson sampler fits the pmf in both regimes") {
    check_poisson_fit(3.5, 11);   // Knuth branch
    check_poisson_fit(42.0, 12);  // PTRS branch
}

TEST_CASE("poisson large-mean sanity") {
    RngStream s(5, 0, 0);
    const double mean = 250'000.0;
    double acc = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) acc += static_cast<double>(s.poisson(mean));
    const double sample_mean = acc / n;
    CHECK(std::abs(sample_mean - mean) < 4.0 * std::sqrt(mean / n));
}

TEST_CASE("uniform_int is unbiased over a small range") {
    RngStream s(9, 0, 0);
    std::vector<std::uint64_t> counts(7, 0);
    const int n = 70'000;
    for (int i = 0; i < n; ++i) ++counts[s.uniform_int(7)];
    const std::vector<double> expected(7, n / 7.0);
    CHECK(chi_square(counts, expected) < chi_square_99(6));
}

TEST_SUITE_END();
