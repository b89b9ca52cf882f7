#include "hawkeslab/grid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hawkeslab/errors.hpp"
#include "hawkeslab/fft.hpp"

namespace hawkeslab {

namespace {

std::int64_t site_floor(double x, double h) {
    return static_cast<std::int64_t>(std::floor(x / h + 1e-9));
}

std::int64_t site_ceil(double x, double h) {
    return static_cast<std::int64_t>(std::ceil(x / h - 1e-9));
}

}  // namespace

GridMeasure::GridMeasure(double h, std::int64_t k_lo, std::int64_t k_hi) : h_(h), k_lo_(k_lo), k_hi_(k_hi) {
    if (!(h > 0.0)) throw LabError(ErrorCode::config_invalid, "grid step must be > 0");
    if (k_hi < k_lo) throw LabError(ErrorCode::config_invalid, "empty grid range");
    if (k_lo > 0 || k_hi < 0)
        throw LabError(ErrorCode::config_invalid, "grid range must contain the origin");
    mass_.assign(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
}

GridMeasure GridMeasure::zero(double h, double x_lo, double x_hi) {
    return GridMeasure(h, site_floor(x_lo, h), site_ceil(x_hi, h));
}

GridMeasure GridMeasure::delta0(double h) {
    GridMeasure g(h, 0, 0);
    g.atom0_ = 1.0;
    return g;
}

GridMeasure GridMeasure::delta_at(double h, double x) {
    const double kf = x / h;
    const auto k = static_cast<std::int64_t>(std::llround(kf));
    if (std::abs(kf - static_cast<double>(k)) > 1e-9)
        throw LabError(ErrorCode::config_invalid, "delta position is not a lattice point");
    if (k == 0) return delta0(h);
    GridMeasure g(h, std::min<std::int64_t>(k, 0), std::max<std::int64_t>(k, 0));
    g.set_site(k, 1.0);
    return g;
}

GridMeasure GridMeasure::from_distribution(const DisplacementSpec& spec, double h, double x_max) {
    const auto K = static_cast<std::int64_t>(std::llround(x_max / h));
    if (K < 1) throw LabError(ErrorCode::config_invalid, "x_max must cover at least one grid step");
    GridMeasure g(h, 0, K);
    double prev = spec.cdf(0.0);
    for (std::int64_t k = 0; k <= K; ++k) {
        const double next = spec.cdf((static_cast<double>(k) + 0.5) * h);
        g.mass_[static_cast<std::size_t>(k)] = std::max(0.0, next - prev);
        prev = next;
    }
    g.truncated_mass_ = std::max(0.0, 1.0 - prev);
    return g;
}

double GridMeasure::site(std::int64_t k) const {
    if (k < k_lo_ || k > k_hi_) return 0.0;
    return mass_[static_cast<std::size_t>(k - k_lo_)];
}

void GridMeasure::set_site(std::int64_t k, double m) {
    if (k < k_lo_ || k > k_hi_) throw LabError(ErrorCode::config_invalid, "site outside grid range");
    mass_[static_cast<std::size_t>(k - k_lo_)] = m;
}

void GridMeasure::add_site(std::int64_t k, double m) {
    if (k < k_lo_ || k > k_hi_) {
        truncated_mass_ += m;
        return;
    }
    mass_[static_cast<std::size_t>(k - k_lo_)] += m;
}

double GridMeasure::total_mass() const {
    return atom0_ + std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

double GridMeasure::cumulative_from_zero(double x) const {
    if (x < 0.0) return 0.0;
    double acc = atom0_;
    const std::int64_t hi = std::min(k_hi_, site_floor(x, h_));
    for (std::int64_t k = std::max<std::int64_t>(k_lo_, 0); k <= hi; ++k)
        acc += mass_[static_cast<std::size_t>(k - k_lo_)];
    return acc;
}

double GridMeasure::interval_mass(double a, double b) const {
    if (b <= a) return 0.0;
    double acc = (a < 0.0 && b >= 0.0) ? atom0_ : 0.0;
    const std::int64_t lo = std::max(k_lo_, site_floor(a, h_) + 1);
    const std::int64_t hi = std::min(k_hi_, site_floor(b, h_));
    for (std::int64_t k = lo; k <= hi; ++k) acc += mass_[static_cast<std::size_t>(k - k_lo_)];
    return acc;
}

GridMeasure GridMeasure::reflected() const {
    GridMeasure out(h_, -k_hi_, -k_lo_);
    for (std::int64_t k = k_lo_; k <= k_hi_; ++k)
        out.mass_[static_cast<std::size_t>(-k - out.k_lo_)] = site(k);
    out.atom0_ = atom0_;
    out.truncated_mass_ = truncated_mass_;
    return out;
}

void GridMeasure::mirror_symmetrize() {
    if (k_lo_ != -k_hi_)
        throw LabError(ErrorCode::config_invalid, "mirror requires a centered grid");
    for (std::int64_t k = 1; k <= k_hi_; ++k) {
        const double m = 0.5 * (site(k) + site(-k));
        set_site(k, m);
        set_site(-k, m);
    }
}

void GridMeasure::scale(double factor) {
    for (double& m : mass_) m *= factor;
    atom0_ *= factor;
    truncated_mass_ *= factor;
}

void GridMeasure::add(const GridMeasure& other) {
    if (other.h_ != h_ || other.k_lo_ != k_lo_ || other.k_hi_ != k_hi_)
        throw LabError(ErrorCode::step_mismatch, "grid layouts differ in add()");
    for (std::size_t i = 0; i < mass_.size(); ++i) mass_[i] += other.mass_[i];
    atom0_ += other.atom0_;
    truncated_mass_ += other.truncated_mass_;
}

void GridMeasure::write_csv(std::ostream& out) const {
    char buf[64];
    out << "# h=" << h_ << "\n";
    out << "# x_lo=" << x_lo() << " x_hi=" << x_hi() << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", atom0_);
    out << "# atom0=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", truncated_mass_);
    out << "# truncated_mass=" << buf << "\n";
    out << "x,mass\n";
    for (std::int64_t k = k_lo_; k <= k_hi_; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", position(k), site(k));
        out << buf << "\n";
    }
}

namespace {

// Deterministic operand order makes convolve(a, b) and convolve(b, a) run the
// identical accumulation, so commutativity holds to the last bit.
bool canonical_before(const GridMeasure& a, const GridMeasure& b) {
    if (a.site_count() != b.site_count()) return a.site_count() < b.site_count();
    if (a.k_lo() != b.k_lo()) return a.k_lo() < b.k_lo();
    if (a.atom0() != b.atom0()) return a.atom0() < b.atom0();
    return a.raw_sites() <= b.raw_sites();
}

}  // namespace

GridMeasure convolve(const GridMeasure& a_in, const GridMeasure& b_in,
                     std::optional<GridRange> out_range) {
    if (a_in.step() != b_in.step())
        throw LabError(ErrorCode::step_mismatch, "convolution operands have different steps");
    const GridMeasure& a = canonical_before(a_in, b_in) ? a_in : b_in;
    const GridMeasure& b = canonical_before(a_in, b_in) ? b_in : a_in;

    const double h = a.step();
    std::int64_t out_lo = a.k_lo() + b.k_lo();
    std::int64_t out_hi = a.k_hi() + b.k_hi();
    if (out_range) {
        out_lo = std::max(out_lo, static_cast<std::int64_t>(std::floor(out_range->x_lo / h + 1e-9)));
        out_hi = std::min(out_hi, static_cast<std::int64_t>(std::ceil(out_range->x_hi / h - 1e-9)));
    }
    out_lo = std::min<std::int64_t>(out_lo, 0);
    out_hi = std::max<std::int64_t>(out_hi, 0);
    GridMeasure out(h, out_lo, out_hi);

    double kept = 0.0;
    auto deposit = [&](std::int64_t k, double m) {
        if (k >= out_lo && k <= out_hi) {
            out.add_site(k, m);
            kept += m;
        }
    };

    // site x site term
    const auto& am = a.raw_sites();
    const auto& bm = b.raw_sites();
    const auto conv = convolve_full(am, bm);
    const std::int64_t base = a.k_lo() + b.k_lo();
    for (std::size_t i = 0; i < conv.size(); ++i) {
        // FFT round-off can leave tiny negative dust in empty cells.
        const double m = conv[i] < 0.0 ? 0.0 : conv[i];
        deposit(base + static_cast<std::int64_t>(i), m);
    }

    // atom cross terms keep their exact positions
    if (a.atom0() != 0.0)
        for (std::int64_t k = b.k_lo(); k <= b.k_hi(); ++k) deposit(k, a.atom0() * b.site(k));
    if (b.atom0() != 0.0)
        for (std::int64_t k = a.k_lo(); k <= a.k_hi(); ++k) deposit(k, b.atom0() * a.site(k));
    out.set_atom0(a.atom0() * b.atom0());

    const double produced = a.total_mass() * b.total_mass() - out.atom0();
    out.add_truncated(std::max(0.0, produced - kept) + a.truncated_mass() * b.total_mass() +
                      b.truncated_mass() * a.total_mass());
    return out;
}

}  // namespace hawkeslab
