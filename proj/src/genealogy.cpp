#include "hawkeslab/genealogy.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

KestenTree grow_kesten(std::uint64_t node_budget, RngStream& stream) {
    if (node_budget < 1) throw ConfigError("kesten tree needs node_budget >= 1");
    KestenTree tree;
    tree.nodes.push_back(GenealogyNode{-1, NodeKind::special, 0, false, 0});
    tree.spine.push_back(0);
    tree.budget_used = 1;

    std::deque<std::int32_t> queue{0};
    while (!queue.empty() && !tree.truncated) {
        const std::int32_t id = queue.front();
        queue.pop_front();
        GenealogyNode& node = tree.nodes[static_cast<std::size_t>(id)];
        const bool special = node.kind == NodeKind::special;
        const std::uint64_t n_children = special ? 1 + stream.poisson(1.0) : stream.poisson(1.0);
        const std::uint64_t special_slot = special ? stream.uniform_int(n_children) : n_children;
        const std::int32_t depth = node.depth + 1;

        for (std::uint64_t slot = 0; slot < n_children; ++slot) {
            if (tree.budget_used >= node_budget) {
                tree.truncated = true;
                break;
            }
            const NodeKind kind = slot == special_slot ? NodeKind::special : NodeKind::normal;
            const auto child_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.push_back(GenealogyNode{id, kind, depth, false, 0});
            ++tree.budget_used;
            if (kind == NodeKind::special) tree.spine.push_back(child_id);
            queue.push_back(child_id);
            // re-resolve: push_back may have invalidated the reference
            ++tree.nodes[static_cast<std::size_t>(id)].offspring;
        }
        tree.nodes[static_cast<std::size_t>(id)].children_complete = !tree.truncated;
    }
    return tree;
}

namespace {

std::vector<double> label_tree(const KestenTree& tree, RngStream& stream, const auto& displace) {
    std::vector<double> pos(tree.nodes.size(), 0.0);
    // creation order guarantees parents are labeled before their children
    for (std::size_t id = 1; id < tree.nodes.size(); ++id) {
        const GenealogyNode& node = tree.nodes[id];
        pos[id] = pos[static_cast<std::size_t>(node.parent)] + displace(node, stream);
    }
    return pos;
}

}  // namespace

std::vector<double> label_renewal(const KestenTree& tree, const DisplacementSpec& f1,
                                  const DisplacementSpec& f2, RngStream& stream) {
    return label_tree(tree, stream, [&](const GenealogyNode& node, RngStream& s) {
        return node.kind == NodeKind::normal ? f1.sample(s) : f2.sample(s);
    });
}

std::vector<double> label_backward(const KestenTree& tree, const DisplacementSpec& displacement,
                                   RngStream& stream) {
    return label_tree(tree, stream, [&](const GenealogyNode& node, RngStream& s) {
        const double y = displacement.sample(s);
        return node.kind == NodeKind::normal ? y : -y;
    });
}

void write_tree(std::ostream& out, const KestenTree& tree, const std::vector<double>& positions) {
    char buf[32];
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        const GenealogyNode& node = tree.nodes[id];
        std::snprintf(buf, sizeof buf, "%.17g", id < positions.size() ? positions[id] : 0.0);
        out << id << "," << node.parent << ","
            << (node.kind == NodeKind::special ? "special" : "normal") << "," << buf << "\n";
    }
}

BackwardPalmResult backward_palm_simulate(const DisplacementSpec& displacement, int spine_depth,
                                          std::uint64_t family_budget, Window window,
                                          RngStream& stream) {
    if (spine_depth < 0) throw ConfigError("spine_depth must be >= 0");
    constexpr std::uint32_t kSpineTag = 1;
    constexpr std::uint32_t kFamilyTagBase = 16;

    RngStream spine_stream = stream.substream(kSpineTag);
    std::vector<double> spine{0.0};
    for (int k = 0; k < spine_depth; ++k)
        spine.push_back(spine.back() - displacement.sample(spine_stream));

    BackwardPalmResult result;
    result.spine_end = spine.back();
    std::vector<double> all;
    for (std::size_t i = 0; i < spine.size(); ++i) {
        RngStream family_stream = stream.substream(kFamilyTagBase + static_cast<std::uint32_t>(i));
        const FamilyResult fam = simulate_family(displacement, 1.0, family_budget, family_stream,
                                                 window.hi - spine[i]);
        if (fam.censored) ++result.censored_families;
        for (const double rel : fam.positions) all.push_back(spine[i] + rel);
    }
    result.points = PointConfiguration(window, std::move(all));
    return result;
}

}  // namespace hawkeslab
