#pragma once

// Information dynamics on the trader network.
//
// Each trader carries an information level. Every step the whole field is
// driven toward the threshold; any non-random trader at or above threshold
// topples, passing a fraction alpha of its level to its neighbors split evenly
// by degree, and the neighbors it pushes over threshold adopt the initiating
// trader's status before toppling in turn. Random traders absorb what they
// receive and reset silently.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "obcfp/agents.hpp"
#include "obcfp/network.hpp"
#include "obcfp/rng.hpp"

namespace obcfp {

struct InfoField {
    std::vector<double> level;
    double threshold = 1.0;
    double alpha = 0.95;

    bool above(NodeId i) const noexcept { return level[i] >= threshold; }
    double total() const noexcept;
    double max() const noexcept;
};

struct AvalancheReport {
    std::int64_t step = 0;
    std::vector<NodeId> initiators;
    Status imitated = Status::Holder;
    std::uint64_t size = 0;             // topplings, re-topplings included
    std::vector<NodeId> participants;   // non-random traders whose status was overwritten
};

/// Thrown when a step's topplings exceed the configured cap.
class AvalancheCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform increments on [0, threshold - max]. The trader holding the pre-drive
/// maximum (lowest id on ties) receives the full upper bound and so reaches the
/// threshold exactly. `stream_for(i)` supplies trader i's random stream.
template <class StreamFor>
void drive(InfoField& field, StreamFor&& stream_for) {
    const auto n = field.level.size();
    if (n == 0) return;
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (field.level[i] > field.level[argmax]) argmax = i;
    const double gap = field.threshold - field.level[argmax];
    if (!(gap > 0.0)) return;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = stream_for(static_cast<NodeId>(i));
        field.level[i] += rng.uniform(0.0, gap);
    }
    field.level[argmax] = field.threshold;
}

/// One toppling: I_k -> 0 and each neighbor gains alpha * I_k / degree(k).
/// Throws std::logic_error if trader k is below threshold.
void topple(InfoField& field, NodeId k, const SmallWorldNet& net);

/// Relaxes every trader at or above threshold. Random traders are reset to 0
/// without transmission. Non-random initiators are processed in a random
/// order, each driving a breadth-first cascade that imitates the initiator's
/// status. Returns one report per cascade.
std::vector<AvalancheReport> relax(InfoField& field, const SmallWorldNet& net,
                                   std::span<Status> statuses, std::span<const TraderKind> kinds,
                                   Rng& rng, std::uint64_t topple_cap, std::int64_t step = 0);

}  // namespace obcfp
