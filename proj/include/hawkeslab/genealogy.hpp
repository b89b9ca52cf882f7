#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hawkeslab/cluster.hpp"
#include "hawkeslab/distributions.hpp"
#include "hawkeslab/point_config.hpp"

namespace hawkeslab {

enum class NodeKind : std::uint8_t { normal, special };

struct GenealogyNode {
    std::int32_t parent = -1;  // -1 for the root
    NodeKind kind = NodeKind::normal;
    std::int32_t depth = 0;
    bool children_complete = false;  // false when growth was truncated mid-offspring
    std::uint32_t offspring = 0;
};

/// Size-biased Galton-Watson tree: the root is special; normal nodes draw
/// Pois(1) normal children; special nodes draw 1 + Pois(1) children of which
/// exactly one, chosen uniformly, is special. The special chain is the spine.
struct KestenTree {
    std::vector<GenealogyNode> nodes;   // breadth-first creation order, parents precede children
    std::vector<std::int32_t> spine;    // special node ids from the root
    std::uint64_t budget_used = 0;
    bool truncated = false;
};

KestenTree grow_kesten(std::uint64_t node_budget, RngStream& stream);

/// Renewal-immigration labeling: the root sits at 0, normal nodes displace by
/// F1 from their parent, non-root special nodes by F2. Spine positions are
/// strictly increasing.
std::vector<double> label_renewal(const KestenTree& tree, const DisplacementSpec& f1,
                                  const DisplacementSpec& f2, RngStream& stream);

/// Backward (Palm) labeling: normal nodes displace by +Y, non-root special
/// nodes by -Y, Y ~ F iid. Spine positions are strictly decreasing.
std::vector<double> label_backward(const KestenTree& tree, const DisplacementSpec& displacement,
                                   RngStream& stream);

/// One node per line: id,parent,kind,position.
void write_tree(std::ostream& out, const KestenTree& tree, const std::vector<double>& positions);

/// Direct backward construction of a Palm version: a special point at 0, its
/// ancestors at -X1, -X1-X2, ..., every spine node (the point at 0 included)
/// seeding an independent critical family. Families are pruned at the window's
/// right edge, which cannot change window statistics.
struct BackwardPalmResult {
    PointConfiguration points;
    std::uint64_t censored_families = 0;
    double spine_end = 0.0;  // position of the deepest generated ancestor
};

BackwardPalmResult backward_palm_simulate(const DisplacementSpec& displacement, int spine_depth,
                                          std::uint64_t family_budget, Window window,
                                          RngStream& stream);

}  // namespace hawkeslab
