#include "hawkeslab/hawkes_sim.hpp"

#include <algorithm>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

namespace {

// Stream tags: epochs come from one substream, family i from another keyed by
// i, so truncation choices in one family never shift the draws of any other.
constexpr std::uint32_t kEpochTag = 1;
constexpr std::uint32_t kFamilyTagBase = 16;

}  // namespace

RenewalHawkesResult simulate_renewal_hawkes(const RenewalImmigrationSpec& spec, RngStream& stream) {
    if (!(spec.m >= 0.0 && spec.m < 1.0))
        throw ConfigError("renewal immigration needs m in [0, 1)");
    if (!(spec.target_lambda > 0.0)) throw ConfigError("target_lambda must be > 0");

    const double cutoff_level = spec.displacement.truncation_for_branching(spec.m);
    const TruncatedSpec interarrival{spec.displacement, cutoff_level};
    const double total_len = spec.burn_in + spec.horizon;

    RngStream epoch_stream = stream.substream(kEpochTag);
    std::vector<double> epochs;
    double t = 0.0;
    double gap_sum = 0.0;
    std::uint64_t gap_count = 0;
    while (t <= total_len) {
        epochs.push_back(t);
        const double gap = interarrival.sample(epoch_stream) / spec.target_lambda;
        gap_sum += gap;
        ++gap_count;
        t += gap;
    }

    RenewalHawkesResult result;
    result.immigrants_total = epochs.size();
    result.interarrival_mean = gap_count > 0 ? gap_sum / static_cast<double>(gap_count) : 0.0;

    const Window window{spec.burn_in, total_len, spec.burn_in};
    std::vector<double> all;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const double epoch = epochs[i];
        if (epoch >= spec.burn_in) ++result.immigrants_in_window;
        RngStream family_stream =
            stream.substream(kFamilyTagBase + static_cast<std::uint32_t>(i));
        const FamilyResult fam = simulate_family(spec.displacement, spec.m, spec.family_budget,
                                                 family_stream, total_len - epoch);
        if (fam.censored) ++result.censored_families;
        for (const double rel : fam.positions) {
            const double x = epoch + rel;
            if (x >= spec.burn_in && x <= total_len && rel > 0.0)
                ++result.family_points_in_window;
            all.push_back(x);
        }
    }
    result.points = PointConfiguration(window, std::move(all));
    return result;
}

TwoIndexResult simulate_two_index(const TwoIndexSpec& spec, RngStream& stream) {
    if (!(spec.horizon > 0.0)) throw ConfigError("two_index horizon must be > 0");

    RngStream epoch_stream = stream.substream(kEpochTag);
    std::vector<double> epochs;
    double t = 0.0;
    while (t <= spec.horizon) {
        epochs.push_back(t);
        t += spec.interarrival.sample(epoch_stream);
    }

    TwoIndexResult result;
    result.epochs = epochs.size();
    const Window window{0.0, spec.horizon, 0.0};
    std::vector<double> all;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        RngStream family_stream =
            stream.substream(kFamilyTagBase + static_cast<std::uint32_t>(i));
        const FamilyResult fam = simulate_family(spec.displacement, 1.0, spec.family_budget,
                                                 family_stream, spec.horizon - epochs[i]);
        if (fam.censored) ++result.censored_families;
        for (const double rel : fam.positions) all.push_back(epochs[i] + rel);
    }
    result.points = PointConfiguration(window, std::move(all));
    return result;
}

}  // namespace hawkeslab
