#include "hawkeslab/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "hawkeslab/errors.hpp"
#include "hawkeslab/fft.hpp"

namespace hawkeslab {

DrivingField::DrivingField(double x_lo, double x_hi, double cell_width, RngStream stream)
    : x_lo_(x_lo), w_(cell_width), stream_(stream) {
    if (!(cell_width > 0.0)) throw ConfigError("cell_width must be > 0");
    n_cells_ = std::max(1, static_cast<int>(std::ceil((x_hi - x_lo) / w_)));
    cap_.assign(static_cast<std::size_t>(n_cells_), 0.0);
}

double DrivingField::max_cap() const { return *std::max_element(cap_.begin(), cap_.end()); }

void DrivingField::extend(int cell, double new_cap) {
    double& cap = cap_[static_cast<std::size_t>(cell)];
    if (new_cap <= cap) return;
    const double band = new_cap - cap;
    const std::uint64_t n = stream_.poisson(w_ * band);
    const double cell_lo = x_lo_ + w_ * static_cast<double>(cell);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = cell_lo + w_ * stream_.uniform01();
        const double h = cap + band * stream_.uniform01();
        atoms_.push_back(DrivingAtom{x, h, next_id_++});
    }
    cap = new_cap;
}

namespace {

constexpr std::uint32_t kFieldTag = 7;

double table_lookup(const EmbeddingState& state, double u) {
    if (u < state.table_x0) return 0.0;
    const double t = (u - state.table_x0) / state.table_step;
    const auto idx = static_cast<std::size_t>(t);
    if (idx + 1 >= state.density_table.size()) return state.cfg.displacement.density(u);
    const double frac = t - static_cast<double>(idx);
    return state.density_table[idx] * (1.0 - frac) + state.density_table[idx + 1] * frac;
}

void build_kernels(EmbeddingState& state) {
    const auto& spec = state.cfg.displacement;
    const double w = state.cfg.cell_width;
    const int n_cells = state.field.cell_count();
    const int near = state.cfg.near_bins;

    state.kernel_envelope.resize(static_cast<std::size_t>(n_cells));
    state.kernel_far.assign(static_cast<std::size_t>(n_cells), 0.0);
    for (int d = 0; d < n_cells; ++d) {
        // x in cell i, y in bin i-d have distance in ((d-1) w, (d+1) w)
        state.kernel_envelope[static_cast<std::size_t>(d)] =
            spec.density_sup((static_cast<double>(d) - 1.0) * w, (static_cast<double>(d) + 1.0) * w);
        if (d >= near) state.kernel_far[static_cast<std::size_t>(d)] = spec.density(static_cast<double>(d) * w);
    }

    // dense table of f over the near range, anchored at the support edge so
    // the corner is a node and linear interpolation stays second order
    state.table_x0 = spec.support_left();
    state.table_step = 1.0 / 256.0;
    const double reach = (static_cast<double>(near) + 2.0) * w;
    const auto n_tab = static_cast<std::size_t>(reach / state.table_step) + 2;
    state.density_table.resize(n_tab);
    for (std::size_t i = 0; i < n_tab; ++i)
        state.density_table[i] =
            spec.density(state.table_x0 + static_cast<double>(i) * state.table_step);
}

}  // namespace

EmbeddingState init_embedding(const EmbeddingConfig& cfg, const RngStream& stream) {
    if (!(cfg.lambda >= 0.0)) throw ConfigError("embedding lambda must be >= 0");
    if (!cfg.displacement.has_density())
        throw LabError(ErrorCode::no_density, "embedding needs a displacement density");
    if (!(cfg.window.hi > cfg.window.storage_lo())) throw ConfigError("empty embedding window");

    EmbeddingState state{cfg,
                         DrivingField(cfg.window.storage_lo(), cfg.window.hi, cfg.cell_width,
                                      stream.substream(kFieldTag)),
                         0,
                         {},
                         {},
                         0.0,
                         0,
                         {},
                         {},
                         {},
                         0.0,
                         0.0};
    build_kernels(state);

    for (int c = 0; c < state.field.cell_count(); ++c) state.field.extend(c, cfg.lambda);
    for (const DrivingAtom& a : state.field.atoms()) {
        state.points.push_back(a.x);
        state.atom_ids.emplace_back(a.id, a.x);
    }
    std::sort(state.points.begin(), state.points.end());
    std::sort(state.atom_ids.begin(), state.atom_ids.end());
    return state;
}

void step_embedding(EmbeddingState& state) {
    const int n_cells = state.field.cell_count();
    const double w = state.cfg.cell_width;
    const double x_lo = state.field.x_lo();
    const int near = state.cfg.near_bins;

    std::vector<double> counts(static_cast<std::size_t>(n_cells), 0.0);
    for (const double y : state.points) {
        int c = state.field.cell_of(y);
        c = std::clamp(c, 0, n_cells - 1);
        counts[static_cast<std::size_t>(c)] += 1.0;
    }

    std::vector<double> envelope = convolve_causal(counts, state.kernel_envelope);
    std::vector<double> far = convolve_causal(counts, state.kernel_far);

    for (int c = 0; c < n_cells; ++c) {
        double& e = envelope[static_cast<std::size_t>(c)];
        e = e * (1.0 + 1e-12) + 1e-9;
        if (e > state.cfg.hard_cap)
            throw LabError(ErrorCode::height_runaway, "intensity envelope exceeded the hard cap");
        if (e > state.field.cap(c)) state.field.extend(c, e);
    }

    // candidate atoms: everything below the per-cell envelope, in x order
    std::vector<DrivingAtom> cands;
    for (const DrivingAtom& a : state.field.atoms()) {
        const int c = std::clamp(state.field.cell_of(a.x), 0, n_cells - 1);
        if (a.h <= envelope[static_cast<std::size_t>(c)]) cands.push_back(a);
    }
    std::sort(cands.begin(), cands.end(),
              [](const DrivingAtom& a, const DrivingAtom& b) { return a.x < b.x; });
    state.candidates = cands.size();

    const std::vector<double>& pts = state.points;
    std::vector<double> new_points;
    std::vector<std::pair<std::uint64_t, double>> new_ids;
    new_points.reserve(pts.size() + 16);
    new_ids.reserve(pts.size() + 16);

    double lambda_max = 0.0;
    std::size_t lo_idx = 0, hi_idx = 0;
    for (const DrivingAtom& a : cands) {
        double lam;
        if (state.cfg.exact_lambda) {
            lam = 0.0;
            for (const double y : pts) {
                if (y >= a.x) break;
                lam += state.cfg.displacement.density(a.x - y);
            }
        } else {
            const int c = std::clamp(state.field.cell_of(a.x), 0, n_cells - 1);
            const double near_lo = x_lo + w * static_cast<double>(c - near + 1);
            while (lo_idx < pts.size() && pts[lo_idx] < near_lo) ++lo_idx;
            while (hi_idx < pts.size() && pts[hi_idx] < a.x) ++hi_idx;
            lam = c >= near ? far[static_cast<std::size_t>(c)] : 0.0;
            for (std::size_t i = lo_idx; i < hi_idx; ++i) lam += table_lookup(state, a.x - pts[i]);
        }
        if (lam > state.cfg.hard_cap)
            throw LabError(ErrorCode::height_runaway, "intensity evaluation exceeded the hard cap");
        lambda_max = std::max(lambda_max, lam);
        if (a.h <= lam) {
            new_points.push_back(a.x);
            new_ids.emplace_back(a.id, a.x);
        }
    }

    std::sort(new_ids.begin(), new_ids.end());
    state.points = std::move(new_points);
    state.atom_ids = std::move(new_ids);
    state.lambda_max = lambda_max;
    ++state.g;
}

namespace {

std::uint64_t count_inner(const std::vector<double>& pts, double lo, double hi) {
    const auto a = std::lower_bound(pts.begin(), pts.end(), lo);
    const auto b = std::upper_bound(pts.begin(), pts.end(), hi);
    return static_cast<std::uint64_t>(b - a);
}

std::uint64_t sym_diff_inner(const std::vector<std::pair<std::uint64_t, double>>& a,
                             const std::vector<std::pair<std::uint64_t, double>>& b, double lo,
                             double hi) {
    std::uint64_t diff = 0;
    auto in_window = [&](const std::pair<std::uint64_t, double>& e) {
        return e.second >= lo && e.second <= hi;
    };
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            diff += in_window(a[i]) ? 1 : 0;
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            diff += in_window(b[j]) ? 1 : 0;
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    return diff;
}

}  // namespace

ConvergenceReport run_embedding(EmbeddingState& state, int g_max, double inner_lo, double inner_hi,
                                int stable_consecutive) {
    ConvergenceReport report;
    report.escaped_mass_bound = 1.0 - state.cfg.displacement.cdf(state.cfg.window.buffer);
    report.generations.push_back(
        GenerationRecord{0, count_inner(state.points, inner_lo, inner_hi), 0, 0.0, 0});

    int zero_streak = 0;
    auto prev_ids = state.atom_ids;
    for (int g = 1; g <= g_max; ++g) {
        step_embedding(state);
        const std::uint64_t diff = sym_diff_inner(prev_ids, state.atom_ids, inner_lo, inner_hi);
        prev_ids = state.atom_ids;
        report.generations.push_back(GenerationRecord{g, count_inner(state.points, inner_lo, inner_hi),
                                                      diff, state.lambda_max, state.candidates});
        if (diff == 0) {
            ++zero_streak;
        } else {
            zero_streak = 0;
            report.last_change_g = g;
        }
    }
    report.stabilized = zero_streak >= stable_consecutive;
    return report;
}

}  // namespace hawkeslab
