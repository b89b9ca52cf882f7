#pragma once

#include <cstdint>
#include <vector>

#include "hawkeslab/distributions.hpp"
#include "hawkeslab/point_config.hpp"
#include "hawkeslab/rng.hpp"

namespace hawkeslab {

struct EmbeddingConfig {
    double lambda = 1.0;
    DisplacementSpec displacement = DisplacementSpec::pareto(0.4, 1.0);  // needs a density
    Window window;
    double cell_width = 1.0;  // driving-field cell and far-field bin width
    int near_bins = 64;       // bins evaluated point-by-point; beyond: binned far field
    double hard_cap = 1e6;    // HEIGHT_RUNAWAY threshold for intensity evaluations
    bool exact_lambda = false;  // O(points) per evaluation, cross-check path
};

struct DrivingAtom {
    double x;
    double h;
    std::uint64_t id;
};

/// Unit-rate Poisson random measure on (window + buffer) x (0, inf), simulated
/// lazily in height: each cell carries a cap and fresh bands (cap, new_cap]
/// are filled on demand. Raising a cap only appends atoms; existing atoms are
/// never touched, so earlier generations remain coupled to the same field.
class DrivingField {
  public:
    DrivingField(double x_lo, double x_hi, double cell_width, RngStream stream);

    int cell_count() const { return n_cells_; }
    double cell_width() const { return w_; }
    double x_lo() const { return x_lo_; }
    int cell_of(double x) const { return static_cast<int>((x - x_lo_) / w_); }

    double cap(int cell) const { return cap_[static_cast<std::size_t>(cell)]; }
    double max_cap() const;
    void extend(int cell, double new_cap);

    const std::vector<DrivingAtom>& atoms() const { return atoms_; }
    std::uint64_t atom_count() const { return atoms_.size(); }

  private:
    double x_lo_;
    double w_;
    int n_cells_;
    std::vector<double> cap_;
    std::vector<DrivingAtom> atoms_;
    RngStream stream_;
    std::uint64_t next_id_ = 0;
};

/// State of the embedding recursion: the current generation is exactly the
/// set of driving atoms lying below the current intensity curve.
struct EmbeddingState {
    EmbeddingConfig cfg;
    DrivingField field;
    int g = 0;
    std::vector<double> points;                            // sorted positions of N^(g)
    std::vector<std::pair<std::uint64_t, double>> atom_ids;  // (id, x) sorted by id
    double lambda_max = 0.0;   // largest intensity evaluation in the last step
    std::uint64_t candidates = 0;

    // cached per-config kernels
    std::vector<double> kernel_envelope;
    std::vector<double> kernel_far;
    std::vector<double> density_table;
    double table_x0 = 0.0;
    double table_step = 0.0;
};

/// N^(0): atoms of the driving field below the constant level lambda.
EmbeddingState init_embedding(const EmbeddingConfig& cfg, const RngStream& stream);

/// One recursion step: evaluates the intensity induced by N^(g-1) at every
/// candidate atom position and keeps atoms below the curve. Extends the
/// driving field wherever an envelope of the intensity exceeds the simulated
/// height. Throws HEIGHT_RUNAWAY past cfg.hard_cap.
void step_embedding(EmbeddingState& state);

struct GenerationRecord {
    int g = 0;
    std::uint64_t count_inner = 0;
    std::uint64_t sym_diff_inner = 0;  // |N^(g) delta N^(g-1)| on the inner window
    double lambda_max = 0.0;
    std::uint64_t candidates = 0;
};

struct ConvergenceReport {
    std::vector<GenerationRecord> generations;  // g = 0 .. g_max
    bool stabilized = false;
    int last_change_g = 0;  // last generation with a nonzero symmetric difference
    double escaped_mass_bound = 0.0;  // 1 - F(buffer)
};

/// Iterate to g_max, reporting counts and symmetric differences on
/// [inner_lo, inner_hi]; stabilized once the symmetric difference stays 0 for
/// stable_consecutive generations.
ConvergenceReport run_embedding(EmbeddingState& state, int g_max, double inner_lo, double inner_hi,
                                int stable_consecutive = 3);

}  // namespace hawkeslab
