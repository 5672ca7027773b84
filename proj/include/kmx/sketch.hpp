#pragma once

#include "kmx/hashing.hpp"
#include "kmx/stream.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace kmx {

/// Counters are 4-byte unsigned and saturate at their maximum.
using Counter = std::uint32_t;
inline constexpr std::uint64_t kCounterBytes = sizeof(Counter);
inline constexpr Counter kCounterMax = std::numeric_limits<Counter>::max();

struct CountMinDims {
    std::uint32_t width;
    std::uint32_t depth;
};

/// w = ceil(e / epsilon), d = ceil(ln(1 / delta)). Both arguments in (0, 1).
CountMinDims cm_dims_from_eps_delta(double epsilon, double delta);

/// Largest CountMin width whose d rows fit in `bytes`. Throws
/// InfeasibleBudget when bytes < 4*d, ConfigError when d == 0.
std::uint32_t cm_dims_from_memory(std::uint64_t bytes, std::uint32_t depth);

/// Largest side length w with 4*w*w*d <= bytes.
std::uint32_t matrix_dims_from_memory(std::uint64_t bytes, std::uint32_t depth);

/// Key of an ordered pair for one-dimensional sketches: src*2^31 + dst.
/// Throws ConfigError if either id is >= 2^31.
std::uint64_t edge_key(NodeId src, NodeId dst);

/// CountMin over edge keys: d rows of w saturating counters.
///
/// Single writer; concurrent queries are safe once updates have stopped.
class CountMinSketch {
public:
    CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed);
    explicit CountMinSketch(HashFamily family);

    void update(const Edge& e);
    std::uint64_t query_edge(NodeId src, NodeId dst) const;

    std::uint32_t width() const noexcept { return family_.width(); }
    std::uint32_t depth() const noexcept { return family_.depth(); }
    const HashFamily& family() const noexcept { return family_; }
    std::span<const Counter> counters() const noexcept { return counters_; }
    std::uint64_t counter_bytes() const noexcept { return counters_.size() * kCounterBytes; }
    /// True once any counter has hit kCounterMax.
    bool saturated() const noexcept { return saturated_; }

private:
    HashFamily family_;
    std::vector<Counter> counters_;
    bool saturated_ = false;
};

enum class MatrixKind { tcm, gmatrix };

std::string_view to_string(MatrixKind kind) noexcept;

/// d layers of w x w counters. Edge (i, j) increments cell (h_r(i), h_r(j))
/// of every layer r, so rows aggregate a source bucket's out-edges and
/// nonzero cells form a bucket-level digraph.
///
/// Both kinds share the pairwise-independent family; the tag only records
/// which baseline the instance plays.
class MatrixSketch {
public:
    MatrixSketch(MatrixKind kind, std::uint32_t width, std::uint32_t depth, std::uint64_t seed);
    MatrixSketch(MatrixKind kind, HashFamily family);

    void update(const Edge& e);

    /// Minimum over layers of the edge's cell.
    std::uint64_t query_edge(NodeId src, NodeId dst) const;
    /// Minimum over layers of the source row sum.
    std::uint64_t query_node_out(NodeId v) const;
    /// True iff the edge's cell is nonzero in every layer.
    bool has_edge(NodeId src, NodeId dst) const;
    /// Per-layer BFS over the bucket digraph, combined by AND. Never a false
    /// negative for edges that were inserted.
    bool query_reachable(NodeId a, NodeId b) const;

    /// Nonzero-cell masks of src's row in every layer, layer r occupying
    /// words [r*mask_words(w), (r+1)*mask_words(w)). Edge (src, v) may exist
    /// iff bit h_r(v) is set in every layer.
    void row_masks(NodeId src, std::vector<std::uint64_t>& masks) const;

    MatrixKind kind() const noexcept { return kind_; }
    std::uint32_t width() const noexcept { return family_.width(); }
    std::uint32_t depth() const noexcept { return family_.depth(); }
    const HashFamily& family() const noexcept { return family_; }
    std::span<const Counter> counters() const noexcept { return counters_; }
    std::uint64_t counter_bytes() const noexcept { return counters_.size() * kCounterBytes; }
    bool saturated() const noexcept { return saturated_; }

    std::span<const Counter> row(std::uint32_t layer, std::uint32_t bucket) const noexcept {
        const std::size_t w = width();
        return {counters_.data() + (std::size_t{layer} * w + bucket) * w, w};
    }

private:
    Counter& cell(std::uint32_t layer, std::uint32_t r, std::uint32_t c) noexcept {
        const std::size_t w = width();
        return counters_[(std::size_t{layer} * w + r) * w + c];
    }

    MatrixKind kind_;
    HashFamily family_;
    std::vector<Counter> counters_;
    bool saturated_ = false;
};

}  // namespace kmx
