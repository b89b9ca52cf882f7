#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace hawkeslab {

/// Observation window [lo, hi] with a left buffer: points in
/// [lo - buffer, hi] are stored, statistics read [lo, hi] only. Displacements
/// are nonnegative, so influence travels rightward and no right buffer is
/// needed.
struct Window {
    double lo = 0.0;
    double hi = 0.0;
    double buffer = 0.0;

    double length() const { return hi - lo; }
    double storage_lo() const { return lo - buffer; }
    bool stores(double x) const { return x >= storage_lo() && x <= hi; }
};

/// Finite sorted multiset of positions inside a window. Ties are kept as
/// multiplicities.
class PointConfiguration {
  public:
    PointConfiguration() = default;
    explicit PointConfiguration(Window window) : window_(window) {}
    /// Takes ownership, sorts, and drops anything outside storage.
    PointConfiguration(Window window, std::vector<double> points);

    const Window& window() const { return window_; }
    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    /// Number of stored points in (a, b].
    std::size_t count_between(double a, double b) const;
    /// Number of points in the observation window [lo, hi].
    std::size_t count_window() const;

    /// One position per line, 17 significant digits.
    void write_plaintext(std::ostream& out) const;

  private:
    Window window_;
    std::vector<double> points_;
};

}  // namespace hawkeslab
