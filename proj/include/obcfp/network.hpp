#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "obcfp/rng.hpp"

namespace obcfp {

using NodeId = std::uint32_t;

/// Undirected simple graph over traders. Neighbor lists are kept sorted.
class SmallWorldNet {
public:
    SmallWorldNet() = default;
    explicit SmallWorldNet(std::vector<std::vector<NodeId>> adjacency);

    std::size_t size() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept;

    /// Throws std::out_of_range for an invalid id.
    std::span<const NodeId> neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const { return neighbors(i).size(); }

    bool has_edge(NodeId i, NodeId j) const;
    bool is_connected() const;

    /// Edges as (i, j) pairs with i < j, lexicographically ordered.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    const std::vector<std::vector<NodeId>>& adjacency() const noexcept { return adj_; }

    bool operator==(const SmallWorldNet&) const = default;

private:
    std::vector<std::vector<NodeId>> adj_;
};

/// side x side grid with von Neumann neighborhoods and open boundaries.
/// Node id = row * side + col. Throws std::invalid_argument if side < 2.
SmallWorldNet build_lattice(std::uint32_t side);

/// Watts-Strogatz rewiring. Each edge (i, j), i < j, of the input is visited in
/// order and with probability p has its j endpoint replaced by a uniformly drawn
/// node k that is neither i nor already adjacent to i. An edge is left alone if
/// removing it would isolate j or no valid k is found in a bounded number of
/// attempts. Edge count is preserved.
SmallWorldNet rewire(const SmallWorldNet& net, double p, Rng& rng);

/// Writes `i,j` lines, one per undirected edge.
void write_edge_list(const SmallWorldNet& net, const std::filesystem::path& path);

}  // namespace obcfp
