#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kmx {

/// Dense node identifier assigned by interning, consecutive from 0.
using NodeId = std::uint32_t;

/// One directed stream element with unit weight.
struct Edge {
    NodeId src = 0;
    NodeId dst = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Packs an ordered node pair into one 64-bit word (src in the high half).
constexpr std::uint64_t pack_pair(NodeId src, NodeId dst) noexcept {
    return (std::uint64_t{src} << 32) | dst;
}

/// Maps external labels to dense ids in first-seen order.
class LabelInterner {
public:
    NodeId intern(std::string_view label);
    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(NodeId id) const { return labels_.at(id); }

private:
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<std::string> labels_;
};

/// An ordered, replayable edge sequence.
class GraphStream {
public:
    GraphStream() = default;
    GraphStream(std::vector<Edge> edges, std::size_t node_count, std::string source = {});

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    /// Number of distinct ids the stream may use: every id is < node_count().
    std::size_t node_count() const noexcept { return node_count_; }
    /// Where the stream came from (file path or generator description).
    const std::string& source() const noexcept { return source_; }

    auto begin() const noexcept { return edges_.begin(); }
    auto end() const noexcept { return edges_.end(); }

private:
    std::vector<Edge> edges_;
    std::size_t node_count_ = 0;
    std::string source_;
};

/// Parses SNAP-style edge-list text. '#' lines are comments, blank lines are
/// skipped, tokens beyond the second are ignored. Labels are interned in
/// first-seen order (source before destination). Throws ParseError.
GraphStream parse_edge_list(std::istream& in, std::string source = {});

/// Loads an edge-list file; a ".gz" suffix selects gzip decoding.
/// Throws IoError when the file cannot be read, ParseError on bad lines.
GraphStream load_edge_list(const std::filesystem::path& path);

/// Writes `stream` as a plain edge list with a comment header.
void write_edge_list(const GraphStream& stream, const std::filesystem::path& path);

/// Uniform sample of min(k, m) edges (algorithm R), deterministic per seed.
/// Throws ConfigError when k == 0.
std::vector<Edge> reservoir_sample(std::span<const Edge> stream, std::size_t k, std::uint64_t seed);

/// Keeps round(fraction*m) edges chosen by reservoir sampling, in their
/// original stream order. fraction must lie in (0, 1].
GraphStream prefilter(const GraphStream& stream, double fraction, std::uint64_t seed);

/// Directed edges whose endpoints follow a Zipf(skew) rank law over
/// [0, n_nodes); id r has rank r+1. Self-loops are allowed.
GraphStream synth_zipf(std::size_t n_nodes, std::size_t n_edges, double skew, std::uint64_t seed);

/// Exact frequencies and adjacency of a replayed stream.
class ExactOracle {
public:
    ExactOracle() = default;
    explicit ExactOracle(std::span<const Edge> stream);

    void add(const Edge& e);

    std::uint64_t edge_freq(NodeId src, NodeId dst) const;
    std::uint64_t node_out_freq(NodeId v) const;
    /// Distinct out-neighbours in ascending order.
    std::span<const NodeId> neighbors(NodeId v) const;
    std::uint64_t total_edges() const noexcept { return total_; }
    std::size_t distinct_edges() const noexcept { return edge_freq_.size(); }

    /// Directed BFS reachability; reachable(a, a) is true.
    bool reachable(NodeId a, NodeId b) const;

private:
    std::unordered_map<std::uint64_t, std::uint64_t> edge_freq_;
    std::vector<std::uint64_t> out_freq_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::uint64_t total_ = 0;
};

}  // namespace kmx
