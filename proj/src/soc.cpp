#include "obcfp/soc.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

namespace obcfp {

double InfoField::total() const noexcept { return std::accumulate(level.begin(), level.end(), 0.0); }

double InfoField::max() const noexcept {
    return level.empty() ? 0.0 : *std::max_element(level.begin(), level.end());
}

void topple(InfoField& field, NodeId k, const SmallWorldNet& net) {
    if (!field.above(k))
        throw std::logic_error("topple: trader " + std::to_string(k) + " is below threshold");
    const auto nbrs = net.neighbors(k);
    const double released = field.level[k];
    field.level[k] = 0.0;
    if (nbrs.empty()) return;
    const double share = field.alpha * released / static_cast<double>(nbrs.size());
    for (NodeId j : nbrs) field.level[j] += share;
}

std::vector<AvalancheReport> relax(InfoField& field, const SmallWorldNet& net,
                                   std::span<Status> statuses, std::span<const TraderKind> kinds,
                                   Rng& rng, std::uint64_t topple_cap, std::int64_t step) {
    const std::size_t n = field.level.size();
    if (statuses.size() != n || kinds.size() != n || net.size() != n)
        throw std::invalid_argument("relax: field, network, statuses and kinds must agree in size");

    std::vector<NodeId> initiators;
    for (NodeId i = 0; i < n; ++i) {
        if (!field.above(i)) continue;
        if (kinds[i] == TraderKind::Random)
            field.level[i] = 0.0;
        else
            initiators.push_back(i);
    }
    // Fisher-Yates; std::shuffle's draw sequence is implementation-defined.
    for (std::size_t i = initiators.size(); i > 1; --i)
        std::swap(initiators[i - 1], initiators[rng.below(i)]);

    std::vector<AvalancheReport> reports;
    std::vector<std::uint32_t> joined(n, 0);
    std::vector<char> queued(n, 0);
    std::deque<NodeId> queue;
    std::uint64_t topplings = 0;
    std::uint32_t cascade = 0;

    for (NodeId init : initiators) {
        if (!field.above(init)) continue;  // consumed by an earlier cascade
        ++cascade;
        AvalancheReport report;
        report.step = step;
        report.initiators.push_back(init);
        report.imitated = statuses[init];
        joined[init] = cascade;

        queue.push_back(init);
        queued[init] = 1;
        while (!queue.empty()) {
            const NodeId k = queue.front();
            queue.pop_front();
            queued[k] = 0;
            if (!field.above(k)) continue;
            if (++topplings > topple_cap)
                throw AvalancheCapExceeded("step " + std::to_string(step) + ": more than " +
                                           std::to_string(topple_cap) + " topplings");
            topple(field, k, net);
            ++report.size;
            for (NodeId j : net.neighbors(k)) {
                if (!field.above(j)) continue;
                if (kinds[j] == TraderKind::Random) {
                    field.level[j] = 0.0;
                    continue;
                }
                if (joined[j] != cascade) {
                    joined[j] = cascade;
                    statuses[j] = report.imitated;
                    report.participants.push_back(j);
                }
                if (!queued[j]) {
                    queued[j] = 1;
                    queue.push_back(j);
                }
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace obcfp
