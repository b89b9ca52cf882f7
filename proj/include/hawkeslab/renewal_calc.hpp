#pragma once

#include <vector>

#include "hawkeslab/grid_measure.hpp"

namespace hawkeslab {

/// Regularly varying tail pinned by its Laplace behaviour:
/// 1 - Fhat(s) ~ s^alpha * ell as s -> 0, equivalently
/// 1 - F(x) ~ ell / (x^alpha * Gamma(1-alpha)). With this normalization the
/// renewal function obeys U(x) ~ x^alpha / (ell * Gamma(1+alpha)) and the
/// two-index mean measure with alpha1 + alpha2 = 1 has rate
/// U-bar(x)/x -> 1/(ell1 * ell2).
struct TailSpec {
    double alpha;  // in (0, 1)
    double ell;    // constant slowly varying part, > 0
};

/// Pareto spec realizing a TailSpec exactly (constant slowly varying part).
DisplacementSpec pareto_for_tail(const TailSpec& tail);

struct RenewalOptions {
    double mass_eps = 1e-12;  // stop once the residual convolution power is this small
    int max_doublings = 48;
};

/// U = sum_g F^{g*} on [0, x_max], computed by exponential doubling
/// U_{n+1} = U_n + F^{2^n *} * U_n. Requires a one-sided sub-probability grid.
GridMeasure renewal_function(const GridMeasure& f, double x_max, const RenewalOptions& opts = {});

/// Same function by forward substitution of U = delta_0 + F * U. Quadratic in
/// the site count; used as the independent cross-check at small sizes.
GridMeasure renewal_function_direct(const GridMeasure& f, double x_max);

/// Mean measure of a renewal process (interarrival f1) dressed with critical
/// families (displacement f2): U1 * U2 on [0, x_max].
GridMeasure two_index_mean(const GridMeasure& f1, const GridMeasure& f2, double x_max,
                           const RenewalOptions& opts = {});

/// Laplace-Stieltjes transform sum_k exp(-s x_k) mass_k + atom0.
double laplace(const GridMeasure& g, double s);

struct PalmOptions {
    double cauchy_tol = 1e-6;  // residual-increment tolerance for the symmetrized sum
    double mass_eps = 1e-12;
    int max_doublings = 48;
};

/// Palm mean measure U0 = U_sym * (U + U_- - delta_0) on [-x_max, x_max],
/// where U_sym is the occupation measure of the symmetrized walk. Exactly
/// symmetric, atom at 0 equal to 1 for atomless f. Throws DIVERGENT when the
/// symmetrized sum fails to converge on the grid (recurrent step law).
GridMeasure palm_mean_measure(const GridMeasure& f, double x_max, const PalmOptions& opts = {});

enum class FinitenessVerdict { bounded, growing, inconclusive };

const char* to_string(FinitenessVerdict v);

struct ScanOptions {
    std::vector<double> ranges{1e2, 1e3, 1e4};
    double h = 0.01;
    double ell = 1.0;
    double probe_hi = 1.0;    // classify growth of U0([0, probe_hi])
    double ratio_lo = 0.75;   // increment ratio below which the sequence is Cauchy-flat
    double ratio_hi = 1.25;
    double abs_tol = 5e-3;    // relative increment considered negligible outright
};

struct ScanEntry {
    double alpha;
    FinitenessVerdict verdict;
    std::vector<double> values;  // U0([0, probe_hi]) per range
};

/// Evaluate U0([0, probe]) on growing grid ranges and classify each tail index
/// as bounded / growing / inconclusive from the increment ratios.
std::vector<ScanEntry> palm_local_finiteness_scan(const std::vector<double>& alphas,
                                                  const ScanOptions& opts = {});

}  // namespace hawkeslab
