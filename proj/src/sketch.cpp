#include "kmx/sketch.hpp"

#include "kmx/error.hpp"
#include "kmx/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>

namespace kmx {

namespace {

void warn_saturation(std::string_view what) {
    std::cerr << "warning: " << what << " counter saturated at " << kCounterMax
              << "; further increments of that cell are dropped\n";
}

std::uint64_t isqrt(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

void check_depth(std::uint32_t depth) {
    if (depth == 0) throw ConfigError("sketch depth must be >= 1");
}

}  // namespace

CountMinDims cm_dims_from_eps_delta(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    const double w = std::ceil(std::numbers::e / epsilon);
    const double d = std::ceil(std::log(1.0 / delta));
    if (w > 4294967295.0) throw ConfigError("epsilon too small: width overflows");
    return {static_cast<std::uint32_t>(w), std::max<std::uint32_t>(1, static_cast<std::uint32_t>(d))};
}

std::uint32_t cm_dims_from_memory(std::uint64_t bytes, std::uint32_t depth) {
    check_depth(depth);
    const std::uint64_t row = kCounterBytes * depth;
    if (bytes < row) throw InfeasibleBudget(bytes, row, "budget cannot hold one counter per row");
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(bytes / row, 0xffffffffu));
}

std::uint32_t matrix_dims_from_memory(std::uint64_t bytes, std::uint32_t depth) {
    check_depth(depth);
    const std::uint64_t layer_cell = kCounterBytes * depth;
    if (bytes < layer_cell) throw InfeasibleBudget(bytes, layer_cell, "budget cannot hold one cell per layer");
    return static_cast<std::uint32_t>(isqrt(bytes / layer_cell));
}

std::uint64_t edge_key(NodeId src, NodeId dst) {
    constexpr NodeId kLimit = NodeId{1} << 31;
    if (src >= kLimit || dst >= kLimit) throw ConfigError("node id exceeds 2^31 - 1");
    return (std::uint64_t{src} << 31) + dst;
}

// ---------------------------------------------------------------- CountMin

CountMinSketch::CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed)
    : CountMinSketch(HashFamily(seed, depth, width)) {}

CountMinSketch::CountMinSketch(HashFamily family)
    : family_(std::move(family)), counters_(std::size_t{family_.width()} * family_.depth(), 0) {}

void CountMinSketch::update(const Edge& e) {
    const std::uint64_t key = edge_key(e.src, e.dst);
    const std::size_t w = width();
    for (std::uint32_t r = 0; r < depth(); ++r) {
        Counter& c = counters_[r * w + family_.bucket_unchecked(r, key)];
        if (c == kCounterMax) {
            if (!saturated_) warn_saturation("CountMin");
            saturated_ = true;
        } else {
            ++c;
        }
    }
}

std::uint64_t CountMinSketch::query_edge(NodeId src, NodeId dst) const {
    const std::uint64_t key = edge_key(src, dst);
    const std::size_t w = width();
    Counter best = kCounterMax;
    for (std::uint32_t r = 0; r < depth(); ++r) {
        best = std::min(best, counters_[r * w + family_.bucket_unchecked(r, key)]);
    }
    return best;
}

// ------------------------------------------------------------------ Matrix

std::string_view to_string(MatrixKind kind) noexcept {
    return kind == MatrixKind::tcm ? "tcm" : "gmatrix";
}

MatrixSketch::MatrixSketch(MatrixKind kind, std::uint32_t width, std::uint32_t depth, std::uint64_t seed)
    : MatrixSketch(kind, HashFamily(seed, depth, width)) {}

MatrixSketch::MatrixSketch(MatrixKind kind, HashFamily family)
    : kind_(kind),
      family_(std::move(family)),
      counters_(std::size_t{family_.width()} * family_.width() * family_.depth(), 0) {}

void MatrixSketch::update(const Edge& e) {
    for (std::uint32_t r = 0; r < depth(); ++r) {
        Counter& c = cell(r, family_.bucket_unchecked(r, e.src), family_.bucket_unchecked(r, e.dst));
        if (c == kCounterMax) {
            if (!saturated_) warn_saturation(to_string(kind_));
            saturated_ = true;
        } else {
            ++c;
        }
    }
}

std::uint64_t MatrixSketch::query_edge(NodeId src, NodeId dst) const {
    Counter best = kCounterMax;
    const std::size_t w = width();
    for (std::uint32_t r = 0; r < depth(); ++r) {
        const std::size_t row = family_.bucket_unchecked(r, src);
        const std::size_t col = family_.bucket_unchecked(r, dst);
        best = std::min(best, counters_[(r * w + row) * w + col]);
    }
    return best;
}

std::uint64_t MatrixSketch::query_node_out(NodeId v) const {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t r = 0; r < depth(); ++r) {
        best = std::min(best, kernels::row_sum(row(r, family_.bucket_unchecked(r, v))));
    }
    return best;
}

bool MatrixSketch::has_edge(NodeId src, NodeId dst) const {
    const std::size_t w = width();
    for (std::uint32_t r = 0; r < depth(); ++r) {
        const std::size_t row = family_.bucket_unchecked(r, src);
        const std::size_t col = family_.bucket_unchecked(r, dst);
        if (counters_[(r * w + row) * w + col] == 0) return false;
    }
    return true;
}

bool MatrixSketch::query_reachable(NodeId a, NodeId b) const {
    if (a == b) return true;
    const std::uint32_t w = width();
    const std::size_t words = kernels::mask_words(w);
    std::vector<std::uint64_t> visited(words);
    std::vector<std::uint64_t> arcs(words);
    std::vector<std::uint32_t> frontier;

    for (std::uint32_t r = 0; r < depth(); ++r) {
        const std::uint32_t start = family_.bucket_unchecked(r, a);
        const std::uint32_t goal = family_.bucket_unchecked(r, b);
        std::fill(visited.begin(), visited.end(), 0);
        frontier.assign(1, start);
        // The start bucket is only "reached" through a cycle, so it is not
        // pre-marked: start == goal needs a nonzero path back to itself.
        bool found = false;
        while (!frontier.empty() && !found) {
            const std::uint32_t u = frontier.back();
            frontier.pop_back();
            kernels::nonzero_mask(row(r, u), arcs);
            for (std::size_t k = 0; k < words; ++k) {
                std::uint64_t fresh = arcs[k] & ~visited[k];
                visited[k] |= fresh;
                while (fresh != 0) {
                    const auto bit = static_cast<std::uint32_t>(std::countr_zero(fresh));
                    fresh &= fresh - 1;
                    const auto v = static_cast<std::uint32_t>(k * 64 + bit);
                    if (v == goal) found = true;
                    frontier.push_back(v);
                }
            }
        }
        if (!found) return false;
    }
    return true;
}

void MatrixSketch::row_masks(NodeId src, std::vector<std::uint64_t>& masks) const {
    const std::size_t words = kernels::mask_words(width());
    masks.resize(words * depth());
    for (std::uint32_t r = 0; r < depth(); ++r) {
        kernels::nonzero_mask(row(r, family_.bucket_unchecked(r, src)),
                              std::span<std::uint64_t>(masks.data() + r * words, words));
    }
}

}  // namespace kmx
