#pragma once

#include <cstdint>
#include <vector>

#include "hawkeslab/rng.hpp"

namespace hawkeslab {

/// Truncated INAR(infinity) specification: lag weights alpha_1..alpha_k_max
/// with sum <= 1; sum exactly 1 is the critical case.
struct InarSpec {
    std::vector<double> alpha;   // alpha[k-1] is the lag-k weight
    double target_lambda = 1.0;  // prehistory mean
    double truncated_tail = 0.0; // weight mass lost to the lag cutoff, metadata

    std::size_t k_max() const { return alpha.size(); }
    double weight_sum() const;
    /// Rescale the weights to sum exactly 1, recording the adjustment.
    void normalize();
};

/// Critical heavy-lag weights alpha_k proportional to k^-exponent, normalized
/// over k <= k_max; exponent in (1, 2) gives infinite mean lag before
/// truncation.
InarSpec heavy_tail_weights(std::size_t k_max, double exponent, double target_lambda);

struct InarPath {
    std::vector<std::int64_t> x;  // index 0 is time -k_max; prehistory occupies k_max entries
    std::size_t prehistory = 0;   // number of prehistory entries
    std::size_t burnin = 0;       // forward entries excluded from statistics
    std::uint64_t total_events = 0;

    std::int64_t at(std::ptrdiff_t n) const {  // n = 0 is the first forward index
        return x[static_cast<std::size_t>(n + static_cast<std::ptrdiff_t>(prehistory))];
    }
    std::size_t forward_length() const { return x.size() - prehistory; }
};

/// Thinning recursion: X_n = sum_k sum_{l <= X_{n-k}} Pois(alpha_k) drawn as
/// independent Pois(alpha_k X_{n-k}) summands per lag. Prehistory is iid
/// Pois(target_lambda). Throws EXPLOSION past the event cap.
InarPath simulate_inar(const InarSpec& spec, std::size_t n_steps, std::size_t burnin,
                       RngStream& stream, std::uint64_t event_cap = 100'000'000);

/// Innovations u_n = X_n - sum_k alpha_k X_{n-k} for forward indices.
std::vector<double> innovations(const InarPath& path, const InarSpec& spec);

/// Empirical check of the counting identity: draw K ~ Pois(1), Y_l iid from
/// (alpha_k), and bin xi_k = #{Y_l = k}; the xi_k are Pois(alpha_k),
/// independent over k.
struct ThinningReport {
    std::uint64_t replications = 0;
    double mean_xi1 = 0.0;
    double se_xi1 = 0.0;
    double cov_xi1_xi2 = 0.0;
    double se_cov = 0.0;
    std::uint64_t zero_k_draws = 0;       // replications with K = 0
    bool zero_k_all_zero = true;          // all of them produced xi == 0
    double chi_square_xi1 = 0.0;          // fit of xi_1 against Pois(alpha_1), bins {0, 1, >=2}
};

ThinningReport thinning_counts_check(const InarSpec& spec, std::uint64_t replications,
                                     RngStream& stream);

/// Symmetrized lattice step law p_k = sum_l alpha_l alpha_{k+l} on
/// {-(k_max-1), ..., k_max-1}; symmetric with total mass (sum alpha)^2.
std::vector<double> symmetrized_lattice_step(const InarSpec& spec, std::int64_t& k_min_out);

}  // namespace hawkeslab
