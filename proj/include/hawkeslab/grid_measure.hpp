#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hawkeslab/distributions.hpp"

namespace hawkeslab {

/// Nonnegative measure discretized onto the lattice {k*h : k_lo <= k <= k_hi},
/// with an explicit atom at 0 kept apart from the lattice masses.
///
/// Site k carries the mass of ((k-1/2)h, (k+1/2)h] (midpoint convention), so
/// convolving two sites lands exactly on a site and repeated convolutions do
/// not drift. delta measures at lattice points are exactly representable.
class GridMeasure {
  public:
    GridMeasure(double h, std::int64_t k_lo, std::int64_t k_hi);

    static GridMeasure zero(double h, double x_lo, double x_hi);
    /// Unit atom at the origin on a single-site grid; combines with any range.
    static GridMeasure delta0(double h);
    /// Unit mass at lattice point x (x/h must be integral to 1e-9).
    static GridMeasure delta_at(double h, double x);
    /// Discretize a displacement distribution onto [0, x_max]; the tail mass
    /// beyond the grid is recorded as truncated_mass.
    static GridMeasure from_distribution(const DisplacementSpec& spec, double h, double x_max);

    double step() const { return h_; }
    std::int64_t k_lo() const { return k_lo_; }
    std::int64_t k_hi() const { return k_hi_; }
    double x_lo() const { return static_cast<double>(k_lo_) * h_; }
    double x_hi() const { return static_cast<double>(k_hi_) * h_; }
    std::size_t site_count() const { return mass_.size(); }
    double position(std::int64_t k) const { return static_cast<double>(k) * h_; }

    double site(std::int64_t k) const;
    void set_site(std::int64_t k, double m);
    void add_site(std::int64_t k, double m);
    const std::vector<double>& raw_sites() const { return mass_; }

    double atom0() const { return atom0_; }
    void set_atom0(double m) { atom0_ = m; }

    double truncated_mass() const { return truncated_mass_; }
    void add_truncated(double m) { truncated_mass_ += m; }

    double total_mass() const;
    /// G([0, x]): atom at 0 plus lattice sites in [0, x].
    double cumulative_from_zero(double x) const;
    /// Mass of (a, b] (lattice sites by position, atom included when a < 0 <= b).
    double interval_mass(double a, double b) const;

    GridMeasure reflected() const;
    /// Force exact symmetry site(k) == site(-k); grid must be centered.
    void mirror_symmetrize();

    void scale(double factor);
    /// Add another measure on the identical grid layout.
    void add(const GridMeasure& other);

    void write_csv(std::ostream& out) const;

  private:
    double h_;
    std::int64_t k_lo_, k_hi_;
    std::vector<double> mass_;
    double atom0_ = 0.0;
    double truncated_mass_ = 0.0;
};

struct GridRange {
    double x_lo;
    double x_hi;
};

/// Grid convolution (a*b) including atom cross terms. Output sites outside the
/// requested range are dropped and accounted in truncated_mass. Without an
/// explicit range the full support [a.x_lo+b.x_lo, a.x_hi+b.x_hi] is kept.
/// Throws STEP_MISMATCH on different lattice steps. Exactly commutative.
GridMeasure convolve(const GridMeasure& a, const GridMeasure& b,
                     std::optional<GridRange> out_range = std::nullopt);

}  // namespace hawkeslab
