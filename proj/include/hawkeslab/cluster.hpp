#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "hawkeslab/distributions.hpp"
#include "hawkeslab/point_config.hpp"
#include "hawkeslab/rng.hpp"

namespace hawkeslab {

/// Cluster field [F, m]: every point spawns Pois(m) children displaced by F.
/// m = 1 is the critical field.
struct ClusterField {
    DisplacementSpec displacement;
    double m = 1.0;
};

/// One clustering operation: returns only the children of the input points.
/// Children falling outside the stored window are discarded immediately.
PointConfiguration cluster_once(const ClusterField& field, const PointConfiguration& config,
                                RngStream& stream);

/// Per-generation observer for diagnostics; g starts at 0 (the immigrants).
using GenerationObserver = std::function<void(int g, const PointConfiguration&)>;

/// Superposition sum_{g=0..g_max} N^(g): N^(0) a Poisson random measure with
/// intensity eta on the stored window, each next generation obtained by an
/// independent clustering operation. Throws BUDGET_EXCEEDED when the stored
/// point total passes the budget. For m < 1 and large g_max the empirical
/// intensity on the window approaches eta / (1 - m).
PointConfiguration iterate_generations(double eta, const ClusterField& field, int g_max,
                                       Window window, RngStream& stream,
                                       std::uint64_t point_budget = 200'000'000,
                                       const GenerationObserver& observer = {});

/// One ancestor with all its descendants; positions are ancestor-relative.
struct FamilyResult {
    std::vector<double> positions;  // sorted, all >= 0, includes the ancestor at 0
    std::uint64_t total_count = 0;
    int generations = 0;
    bool censored = false;  // budget stopped growth
};

constexpr double kNoCutoff = std::numeric_limits<double>::infinity();

/// Breadth-first Galton-Watson growth with Pois(m) offspring and F
/// displacements, stopped at extinction or at the point budget. Children
/// beyond position_cutoff are discarded without counting toward the budget;
/// since displacements are nonnegative their descendants could never re-enter
/// [0, position_cutoff], so window statistics are unaffected.
FamilyResult simulate_family(const DisplacementSpec& displacement, double m, std::uint64_t budget,
                             RngStream& stream, double position_cutoff = kNoCutoff);

/// Total-progeny distribution of a plain Galton-Watson process with Pois(m)
/// offspring, same budget semantics as simulate_family but without positions.
/// Independent oracle for censoring statistics.
struct GwTotal {
    std::uint64_t total = 0;
    bool censored = false;
};
GwTotal galton_watson_total(double m, std::uint64_t budget, RngStream& stream);

}  // namespace hawkeslab
