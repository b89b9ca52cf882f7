#include "hawkeslab/point_config.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace hawkeslab {

PointConfiguration::PointConfiguration(Window window, std::vector<double> points)
    : window_(window), points_(std::move(points)) {
    std::erase_if(points_, [&](double x) { return !window_.stores(x); });
    std::sort(points_.begin(), points_.end());
}

std::size_t PointConfiguration::count_between(double a, double b) const {
    const auto lo = std::upper_bound(points_.begin(), points_.end(), a);
    const auto hi = std::upper_bound(points_.begin(), points_.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

std::size_t PointConfiguration::count_window() const {
    const auto lo = std::lower_bound(points_.begin(), points_.end(), window_.lo);
    const auto hi = std::upper_bound(points_.begin(), points_.end(), window_.hi);
    return static_cast<std::size_t>(hi - lo);
}

void PointConfiguration::write_plaintext(std::ostream& out) const {
    char buf[32];
    for (const double x : points_) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf << "\n";
    }
}

}  // namespace hawkeslab
