#include "obcfp/network.hpp"

#include <algorithm>
#include <fstream>
#include <string>

namespace obcfp {
namespace {

constexpr int kRewireAttempts = 64;

void erase_value(std::vector<NodeId>& v, NodeId x) {
    v.erase(std::find(v.begin(), v.end(), x));
}

}  // namespace

SmallWorldNet::SmallWorldNet(std::vector<std::vector<NodeId>> adjacency) : adj_(std::move(adjacency)) {
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

std::size_t SmallWorldNet::edge_count() const noexcept {
    std::size_t degree_sum = 0;
    for (const auto& list : adj_) degree_sum += list.size();
    return degree_sum / 2;
}

std::span<const NodeId> SmallWorldNet::neighbors(NodeId i) const {
    if (i >= adj_.size()) throw std::out_of_range("node id " + std::to_string(i) + " out of range");
    return adj_[i];
}

bool SmallWorldNet::has_edge(NodeId i, NodeId j) const {
    const auto n = neighbors(i);
    return std::binary_search(n.begin(), n.end(), j);
}

bool SmallWorldNet::is_connected() const {
    if (adj_.empty()) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : adj_[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == adj_.size();
}

std::vector<std::pair<NodeId, NodeId>> SmallWorldNet::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < adj_.size(); ++i)
        for (NodeId j : adj_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

SmallWorldNet build_lattice(std::uint32_t side) {
    if (side < 2) throw std::invalid_argument("lattice side must be at least 2");
    const std::size_t n = static_cast<std::size_t>(side) * side;
    std::vector<std::vector<NodeId>> adj(n);
    for (std::uint32_t r = 0; r < side; ++r) {
        for (std::uint32_t c = 0; c < side; ++c) {
            const NodeId i = r * side + c;
            if (r > 0) adj[i].push_back(i - side);
            if (c > 0) adj[i].push_back(i - 1);
            if (c + 1 < side) adj[i].push_back(i + 1);
            if (r + 1 < side) adj[i].push_back(i + side);
        }
    }
    return SmallWorldNet(std::move(adj));
}

SmallWorldNet rewire(const SmallWorldNet& net, double p, Rng& rng) {
    if (p <= 0.0) return net;
    auto adj = net.adjacency();
    const auto n = static_cast<std::uint64_t>(adj.size());
    for (const auto& [i, j] : net.edges()) {
        if (rng.uniform01() >= p) continue;
        if (adj[j].size() <= 1) continue;
        if (adj[i].size() + 1 >= n) continue;
        for (int attempt = 0; attempt < kRewireAttempts; ++attempt) {
            const auto k = static_cast<NodeId>(rng.below(n));
            if (k == i || std::binary_search(adj[i].begin(), adj[i].end(), k)) continue;
            erase_value(adj[i], j);
            erase_value(adj[j], i);
            adj[i].insert(std::lower_bound(adj[i].begin(), adj[i].end(), k), k);
            adj[k].insert(std::lower_bound(adj[k].begin(), adj[k].end(), i), i);
            break;
        }
    }
    return SmallWorldNet(std::move(adj));
}

void write_edge_list(const SmallWorldNet& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [i, j] : net.edges()) out << i << ',' << j << '\n';
}

}  // namespace obcfp
