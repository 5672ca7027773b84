#pragma once

#include "kmx/partitioner.hpp"
#include "kmx/sketch.hpp"
#include "kmx/stream.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace kmx {

/// A sketch budget split into localized sketches by a PartitionPlan. Edges
/// are routed by source vertex, so every occurrence of (i, j) lands in the
/// same local sketch and edge queries touch a single local.
///
/// Local i (including the residual, which is last) hashes with a family
/// seeded by derive_seed(seed, i).
template <class Local>
class PartitionedSketch {
public:
    const PartitionPlan& plan() const noexcept { return plan_; }
    /// Locals in plan order; the residual sketch is last.
    std::span<const Local> locals() const noexcept { return locals_; }
    /// Updates received by each local, residual last.
    std::span<const std::uint64_t> update_counts() const noexcept { return updates_; }
    std::uint64_t counter_bytes() const noexcept {
        std::uint64_t total = 0;
        for (const Local& l : locals_) total += l.counter_bytes();
        return total;
    }
    std::uint32_t depth() const noexcept { return plan_.depth(); }
    /// Wall time of statistics, planning and allocation.
    double init_seconds() const noexcept { return init_seconds_; }

    void update(const Edge& e) {
        const std::size_t p = plan_.route(e.src);
        locals_[p].update(e);
        ++updates_[p];
    }

    std::uint64_t query_edge(NodeId src, NodeId dst) const {
        return locals_[plan_.route(src)].query_edge(src, dst);
    }

protected:
    PartitionedSketch() = default;

    PartitionPlan plan_;
    std::vector<Local> locals_;
    std::vector<std::uint64_t> updates_;
    double init_seconds_ = 0.0;
};

/// Partitioned CountMin.
class GSketch : public PartitionedSketch<CountMinSketch> {
public:
    /// Throws ConfigError on an empty sample, InfeasibleBudget when the budget
    /// cannot be planned.
    static GSketch build(std::span<const Edge> sample, std::uint64_t total_bytes, std::uint32_t depth,
                         std::uint64_t seed, const PlannerOptions& options = {});
};

/// Partitioned matrix sketch with pairwise-independent local families.
///
/// Keeps a dictionary of every node id seen in the sample or the stream; it
/// is the candidate set for reachability and is not counted in the budget.
class KMatrix : public PartitionedSketch<MatrixSketch> {
public:
    static KMatrix build(std::span<const Edge> sample, std::uint64_t total_bytes, std::uint32_t depth,
                         std::uint64_t seed, const PlannerOptions& options = {});

    void update(const Edge& e) {
        PartitionedSketch::update(e);
        remember(e.src);
        remember(e.dst);
    }

    std::uint64_t query_node_out(NodeId v) const { return locals_[plan_.route(v)].query_node_out(v); }

    /// BFS over dictionary vertices; u -> v is an arc when u's local sketch
    /// reports a nonzero cell for (u, v) in every layer. reachable(a, a) is
    /// true. No false negatives relative to the streamed graph.
    bool query_reachable(NodeId a, NodeId b) const;

    /// Every dictionary vertex the BFS from `a` reaches (excluding `a` unless
    /// it lies on a cycle), in ascending id order.
    std::vector<NodeId> reachable_set(NodeId a) const;

    std::span<const NodeId> dictionary() const noexcept { return dictionary_; }
    /// Bytes held by the vertex dictionary (reported, not budgeted).
    std::uint64_t dictionary_bytes() const noexcept {
        return seen_.capacity() + dictionary_.capacity() * sizeof(NodeId);
    }

private:
    void remember(NodeId v) {
        if (v >= seen_.size()) seen_.resize(std::size_t{v} + 1, 0);
        if (!seen_[v]) {
            seen_[v] = 1;
            dictionary_.push_back(v);
        }
    }

    // Shared BFS; stops early when `target` is reached (if given).
    bool search(NodeId a, const NodeId* target, std::vector<char>* reached) const;

    std::vector<char> seen_;
    std::vector<NodeId> dictionary_;
};

}  // namespace kmx
