#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "hawkeslab/distributions.hpp"

namespace hawkeslab {

/// Integer step law p_k on {k_min, ..., k_min + probs.size() - 1}.
struct LatticeLaw {
    std::int64_t k_min = 0;
    std::vector<double> probs;

    double sample(RngStream& stream) const;
};

/// Step law of the diagnostic walk: a symmetrized displacement distribution,
/// or an explicit lattice law.
using WalkStep = std::variant<SymmetrizedSpec, LatticeLaw>;

struct WalkSpec {
    WalkStep step = LatticeLaw{0, {1.0}};
    std::uint64_t n_steps = 1 << 16;   // rounded down to the last dyadic checkpoint
    double interval_halfwidth = 1.0;   // occupation target [-h, h]
    std::uint64_t replications = 1000;
};

/// Mean visits of the walk to [-h, h] up to dyadic step counts (g = 0
/// included, so the degenerate walk gives exactly n + 1 visits).
struct OccupationCurve {
    std::vector<std::uint64_t> checkpoints;  // 2^5, 2^6, ...
    std::vector<double> mean_visits;
    std::vector<double> stderr_visits;
    // visits split by sign, for the symmetry diagnostic
    std::vector<double> mean_visits_neg;
    std::vector<double> mean_visits_pos;
};

OccupationCurve occupation_curve(const WalkSpec& spec, RngStream& stream);

enum class WalkVerdict { transient, recurrent, inconclusive };

const char* to_string(WalkVerdict v);

struct TransienceThresholds {
    double slope_lo = 0.05;  // below: transient (with a flat tail)
    double slope_hi = 0.2;   // above: recurrent
    double flat_tol = 0.02;  // relative growth over the last doubling considered flat
};

/// Least-squares slope of log(visits) against log(n) over the tail half of
/// the checkpoints.
double occupation_tail_slope(const OccupationCurve& curve);

/// Classify from the log-log tail slope of the occupation curve.
WalkVerdict classify_transience(const OccupationCurve& curve,
                                const TransienceThresholds& thresholds = {});

}  // namespace hawkeslab
