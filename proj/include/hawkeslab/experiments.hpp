#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hawkeslab/config.hpp"
#include "hawkeslab/rng.hpp"

namespace hawkeslab {

inline constexpr const char* kLabVersion = "0.1.0";

struct RunOptions {
    int threads = 0;  // 0: LAB_THREADS env var, else hardware concurrency
};

/// Replicate-level stream splitting; replicate indices give independent
/// streams, reproducible from (seed, index) alone.
inline RngStream split_stream(std::uint64_t seed, std::uint32_t replicate) {
    return RngStream(seed, replicate, 0);
}

int resolve_threads(int requested);

/// Run fn(replicate) for replicate in [0, n) on a worker pool. Results must be
/// written into replicate-indexed slots; the merge order is then independent
/// of scheduling.
void parallel_replicates(std::uint64_t n, int threads,
                         const std::function<void(std::uint64_t)>& fn);

struct KindInfo {
    std::string name;
    std::string description;
};

std::vector<KindInfo> experiment_kinds();

/// Dispatch an experiment, execute its replications, and return the summary.
/// When cfg.out is nonempty, writes summary.json plus kind-specific artifact
/// files there. Rerunning the same config and seed reproduces bit-identical
/// summaries for any worker count.
nlohmann::ordered_json run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace hawkeslab
