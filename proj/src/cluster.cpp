#include "hawkeslab/cluster.hpp"

#include <algorithm>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

PointConfiguration cluster_once(const ClusterField& field, const PointConfiguration& config,
                                RngStream& stream) {
    const Window& win = config.window();
    std::vector<double> children;
    children.reserve(static_cast<std::size_t>(static_cast<double>(config.size()) * field.m) + 16);
    for (const double parent : config.points()) {
        const std::uint64_t k = stream.poisson(field.m);
        for (std::uint64_t i = 0; i < k; ++i) {
            const double child = parent + field.displacement.sample(stream);
            if (win.stores(child)) children.push_back(child);
        }
    }
    return PointConfiguration(win, std::move(children));
}

PointConfiguration iterate_generations(double eta, const ClusterField& field, int g_max,
                                       Window window, RngStream& stream,
                                       std::uint64_t point_budget,
                                       const GenerationObserver& observer) {
    if (!(eta > 0.0)) throw ConfigError("iterate_generations needs eta > 0");
    const double length = window.hi - window.storage_lo();
    const std::uint64_t n0 = stream.poisson(eta * length);

    std::vector<double> gen(n0);
    for (auto& x : gen) x = window.storage_lo() + length * stream.uniform01();
    std::sort(gen.begin(), gen.end());
    PointConfiguration current(window, std::move(gen));

    std::vector<double> all(current.points().begin(), current.points().end());
    std::uint64_t total = current.size();
    if (observer) observer(0, current);

    for (int g = 1; g <= g_max; ++g) {
        current = cluster_once(field, current, stream);
        total += current.size();
        if (total > point_budget)
            throw LabError(ErrorCode::budget_exceeded,
                           "stored points exceed the configured budget");
        all.insert(all.end(), current.points().begin(), current.points().end());
        if (observer) observer(g, current);
        if (current.empty()) break;
    }
    return PointConfiguration(window, std::move(all));
}

FamilyResult simulate_family(const DisplacementSpec& displacement, double m, std::uint64_t budget,
                             RngStream& stream, double position_cutoff) {
    if (budget < 1) throw ConfigError("family budget must be >= 1");
    FamilyResult result;
    result.positions.push_back(0.0);
    result.total_count = 1;

    std::vector<double> frontier{0.0};
    std::vector<double> next;
    while (!frontier.empty() && !result.censored) {
        next.clear();
        for (const double parent : frontier) {
            const std::uint64_t k = stream.poisson(m);
            for (std::uint64_t i = 0; i < k; ++i) {
                const double child = parent + displacement.sample(stream);
                if (child > position_cutoff) continue;
                if (result.total_count >= budget) {
                    result.censored = true;
                    break;
                }
                ++result.total_count;
                next.push_back(child);
            }
            if (result.censored) break;
        }
        if (!next.empty()) {
            ++result.generations;
            result.positions.insert(result.positions.end(), next.begin(), next.end());
        }
        frontier.swap(next);
    }
    std::sort(result.positions.begin(), result.positions.end());
    return result;
}

GwTotal galton_watson_total(double m, std::uint64_t budget, RngStream& stream) {
    GwTotal result{1, false};
    std::uint64_t frontier = 1;
    while (frontier > 0 && !result.censored) {
        std::uint64_t next = 0;
        for (std::uint64_t i = 0; i < frontier; ++i) {
            const std::uint64_t k = stream.poisson(m);
            for (std::uint64_t c = 0; c < k; ++c) {
                if (result.total >= budget) {
                    result.censored = true;
                    break;
                }
                ++result.total;
                ++next;
            }
            if (result.censored) break;
        }
        frontier = next;
    }
    return result;
}

}  // namespace hawkeslab
