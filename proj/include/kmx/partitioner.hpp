#pragma once

#include "kmx/stream.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace kmx {

/// Sampled out-edge statistics of one source vertex.
struct VertexStat {
    NodeId id = 0;
    std::uint64_t freq = 0;      // sampled edges leaving the vertex
    std::uint32_t distinct = 0;  // distinct sampled destinations

    /// Estimated average edge frequency, freq / distinct.
    double avg() const noexcept { return static_cast<double>(freq) / distinct; }
};

/// Per-source statistics of a stream sample, sorted by vertex id.
class VertexStats {
public:
    VertexStats() = default;
    explicit VertexStats(std::vector<VertexStat> stats);

    std::span<const VertexStat> all() const noexcept { return stats_; }
    std::size_t size() const noexcept { return stats_.size(); }
    const VertexStat* find(NodeId v) const noexcept;
    /// Throws ConfigError when v has no statistics.
    const VertexStat& at(NodeId v) const;

    /// Sum of sampled frequencies over `vertices`.
    std::uint64_t total_freq(std::span<const NodeId> vertices) const;

private:
    std::vector<VertexStat> stats_;
};

/// Counts sampled out-frequency and distinct destinations per source vertex.
/// Throws ConfigError on an empty sample.
VertexStats estimate_stats(std::span<const Edge> sample);

/// Modeled relative error of one localized sketch of width w holding the
/// vertices S:
///   sum_m d(m) * F(S) / (w * f(m)/d(m))  -  sum_m d(m) / w
/// where F(S) is the total sampled frequency of S. May be negative.
double expected_error(std::span<const NodeId> vertices, const VertexStats& stats, std::uint32_t width);

/// Width-free cost of placing S1 and S2 in two equal-width sketches:
///   sum_{m in S1} d(m) * F(S1) / (f(m)/d(m)) + sum_{m in S2} d(m) * F(S2) / (f(m)/d(m)).
/// Each sum uses the total frequency of its own side. Throws ConfigError when
/// the sets overlap or a vertex lacks statistics.
double split_cost(std::span<const NodeId> s1, std::span<const NodeId> s2, const VertexStats& stats);

/// Counter layout the plan is sized for.
enum class Geometry { countmin, matrix };

/// Width of a `depth`-deep sketch of the given geometry that fits `bytes`.
std::uint32_t width_for(Geometry geometry, std::uint64_t bytes, std::uint32_t depth);
/// Counter bytes of a sketch of that width.
std::uint64_t bytes_for(Geometry geometry, std::uint32_t width, std::uint32_t depth) noexcept;

struct PlannerOptions {
    std::uint32_t min_width = 4;
    std::uint32_t max_partitions = 64;
    double residual_fraction = 0.10;  // in [0, 1)
};

struct Partition {
    std::vector<NodeId> vertices;  // in planning order (avg descending)
    std::uint32_t width = 0;
    std::uint64_t budget_bytes = 0;
    std::uint64_t sum_freq = 0;
};

/// One bisection adopted by the planner, with both costs it compared.
struct SplitRecord {
    std::size_t parent_size = 0;
    std::size_t left_size = 0;
    double unsplit_cost = 0;
    double split_cost = 0;
};

/// Vertex-to-partition assignment plus per-partition widths. Vertices that
/// were not sampled as sources route to the residual partition, whose index
/// is partitions().size().
///
/// Immutable; safe for concurrent readers.
class PartitionPlan {
public:
    std::span<const Partition> partitions() const noexcept { return partitions_; }
    const Partition& residual() const noexcept { return residual_; }
    std::size_t residual_index() const noexcept { return partitions_.size(); }
    /// Partition of `v`, or residual_index() for unknown vertices.
    std::size_t route(NodeId v) const noexcept {
        return v < assignment_.size() && assignment_[v] != kUnassigned ? assignment_[v]
                                                                        : residual_index();
    }

    std::uint32_t depth() const noexcept { return depth_; }
    Geometry geometry() const noexcept { return geometry_; }
    std::uint64_t total_bytes() const noexcept { return total_bytes_; }
    /// Counter bytes actually allocated by all partitions plus the residual.
    std::uint64_t allocated_bytes() const noexcept;
    /// Sum over partitions and residual of the bytes needed to grow that
    /// partition's width by one; allocated_bytes() is always above
    /// total_bytes() minus this.
    std::uint64_t granularity_slack() const noexcept;
    std::span<const SplitRecord> splits() const noexcept { return splits_; }

private:
    friend PartitionPlan plan(const VertexStats&, std::uint64_t, std::uint32_t, Geometry, const PlannerOptions&);

    static constexpr std::uint32_t kUnassigned = 0xffffffffu;

    std::vector<Partition> partitions_;
    Partition residual_;
    std::vector<std::uint32_t> assignment_;
    std::vector<SplitRecord> splits_;
    std::uint32_t depth_ = 0;
    Geometry geometry_ = Geometry::matrix;
    std::uint64_t total_bytes_ = 0;
};

/// Splits `total_bytes` between a residual sketch and localized sketches.
///
/// A residual_fraction share goes to the residual. The sampled sources are
/// ordered by avg() descending (ties by id) and the data budget is bisected
/// recursively, breadth first, each segment at the contiguous split point of
/// least split_cost(). Children get equal halves of the parent budget. A
/// segment stays whole when a child would be narrower than min_width, when
/// another partition would exceed max_partitions, or when the best split
/// does not strictly lower split_cost(segment, {}).
///
/// Throws InfeasibleBudget (carrying the smallest workable budget) when the
/// budget cannot hold the residual plus one min_width partition.
PartitionPlan plan(const VertexStats& stats, std::uint64_t total_bytes, std::uint32_t depth,
                   Geometry geometry, const PlannerOptions& options = {});

/// One line per partition: index, width, budget bytes, vertex count, sum of
/// sampled frequency. The residual is listed last with index "residual".
void write_plan(std::ostream& out, const PartitionPlan& plan);

}  // namespace kmx
