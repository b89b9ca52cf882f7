#pragma once

#include <cstdint>

#include "hawkeslab/cluster.hpp"
#include "hawkeslab/distributions.hpp"
#include "hawkeslab/point_config.hpp"

namespace hawkeslab {

/// Hawkes process with renewal immigration: immigrants form a renewal process
/// whose interarrival law is the truncated displacement law F_{c(m)} scaled by
/// 1/target_lambda, each immigrant seeding an independent Pois(m)-branching
/// family. Immigrant rate is then target_lambda*(1-m) and the superposition
/// has average intensity target_lambda.
struct RenewalImmigrationSpec {
    DisplacementSpec displacement = DisplacementSpec::pareto(0.5, 1.0);
    double m = 0.5;              // in [0, 1)
    double target_lambda = 1.0;  // > 0
    double horizon = 1e4;        // statistics window length
    double burn_in = 0.0;        // prefix excluded from statistics
    std::uint64_t family_budget = 1'000'000;
};

struct RenewalHawkesResult {
    PointConfiguration points;  // window [burn_in, burn_in + horizon], buffer burn_in
    std::uint64_t immigrants_total = 0;
    std::uint64_t immigrants_in_window = 0;
    std::uint64_t censored_families = 0;
    double interarrival_mean = 0.0;  // sample mean over all immigrant gaps
    std::uint64_t family_points_in_window = 0;  // conservation cross-check
};

RenewalHawkesResult simulate_renewal_hawkes(const RenewalImmigrationSpec& spec, RngStream& stream);

/// Critical construction on [0, horizon] with two tail indices: renewal epochs
/// with interarrival F1 (an epoch sits at 0), each epoch seeding an
/// independent critical family with displacement F2.
struct TwoIndexSpec {
    DisplacementSpec interarrival = DisplacementSpec::pareto(0.3, 1.0);  // F1, tail index alpha_1
    DisplacementSpec displacement = DisplacementSpec::pareto(0.7, 1.0);  // F2, tail index alpha_2
    double horizon = 1e4;
    std::uint64_t family_budget = 100'000;
};

struct TwoIndexResult {
    PointConfiguration points;  // window [0, horizon]
    std::uint64_t epochs = 0;
    std::uint64_t censored_families = 0;
};

TwoIndexResult simulate_two_index(const TwoIndexSpec& spec, RngStream& stream);

}  // namespace hawkeslab
