#include "kmx/stream.hpp"

#include "kmx/error.hpp"
#include "random.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace kmx {

NodeId LabelInterner::intern(std::string_view label) {
    auto it = ids_.find(std::string(label));
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
}

GraphStream::GraphStream(std::vector<Edge> edges, std::size_t node_count, std::string source)
    : edges_(std::move(edges)), node_count_(node_count), source_(std::move(source)) {}

namespace {

constexpr std::string_view kSpace = " \t\r\v\f";

bool has_garbage(std::string_view line) {
    return std::any_of(line.begin(), line.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u < 0x20 && kSpace.find(c) == std::string_view::npos;
    });
}

// Splits off the next whitespace-delimited token; empty when none is left.
std::string_view next_token(std::string_view& rest) {
    const auto start = rest.find_first_not_of(kSpace);
    if (start == std::string_view::npos) {
        rest = {};
        return {};
    }
    rest.remove_prefix(start);
    const auto stop = std::min(rest.find_first_of(kSpace), rest.size());
    std::string_view token = rest.substr(0, stop);
    rest.remove_prefix(stop);
    return token;
}

std::string read_gzip(const std::filesystem::path& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) throw IoError("cannot open " + path.string());
    std::string data;
    char buf[1 << 16];
    for (;;) {
        const int n = gzread(file, buf, sizeof buf);
        if (n < 0) {
            int code = 0;
            std::string msg = gzerror(file, &code);
            gzclose(file);
            throw IoError("gzip read failed for " + path.string() + ": " + msg);
        }
        if (n == 0) break;
        data.append(buf, static_cast<std::size_t>(n));
    }
    gzclose(file);
    return data;
}

}  // namespace

GraphStream parse_edge_list(std::istream& in, std::string source) {
    LabelInterner interner;
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view rest = line;
        const auto first = rest.find_first_not_of(kSpace);
        if (first == std::string_view::npos || rest[first] == '#') continue;
        if (has_garbage(rest)) throw ParseError(lineno, "control character in edge line");
        const std::string_view a = next_token(rest);
        const std::string_view b = next_token(rest);
        if (b.empty()) throw ParseError(lineno, "expected two node labels");
        const NodeId src = interner.intern(a);
        const NodeId dst = interner.intern(b);
        edges.push_back({src, dst});
    }
    if (in.bad()) throw IoError("read failure while parsing " + source);
    return GraphStream(std::move(edges), interner.size(), std::move(source));
}

GraphStream load_edge_list(const std::filesystem::path& path) {
    if (path.extension() == ".gz") {
        std::istringstream in(read_gzip(path));
        return parse_edge_list(in, path.string());
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_edge_list(in, path.string());
}

void write_edge_list(const GraphStream& stream, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# " << (stream.source().empty() ? "edge list" : stream.source()) << '\n';
    out << "# Nodes: " << stream.node_count() << " Edges: " << stream.size() << '\n';
    for (const Edge& e : stream) out << e.src << '\t' << e.dst << '\n';
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

std::vector<Edge> reservoir_sample(std::span<const Edge> stream, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw ConfigError("reservoir size must be >= 1");
    std::vector<Edge> reservoir;
    reservoir.reserve(std::min(k, stream.size()));
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (i < k) {
            reservoir.push_back(stream[i]);
        } else {
            const auto j = detail::uniform_below(gen, i + 1);
            if (j < k) reservoir[j] = stream[i];
        }
    }
    return reservoir;
}

GraphStream prefilter(const GraphStream& stream, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("prefilter fraction must lie in (0, 1]");
    const auto m = stream.size();
    const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
    if (keep >= m) return stream;
    if (keep == 0) return GraphStream({}, stream.node_count(), stream.source());

    std::vector<std::size_t> idx;
    idx.reserve(keep);
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < m; ++i) {
        if (i < keep) {
            idx.push_back(i);
        } else {
            const auto j = detail::uniform_below(gen, i + 1);
            if (j < keep) idx[j] = i;
        }
    }
    std::sort(idx.begin(), idx.end());
    std::vector<Edge> kept;
    kept.reserve(keep);
    for (auto i : idx) kept.push_back(stream.edges()[i]);
    return GraphStream(std::move(kept), stream.node_count(), stream.source());
}

GraphStream synth_zipf(std::size_t n_nodes, std::size_t n_edges, double skew, std::uint64_t seed) {
    if (n_nodes < 2) throw ConfigError("synthetic stream needs at least 2 nodes");
    if (n_edges < 1) throw ConfigError("synthetic stream needs at least 1 edge");
    if (!(skew >= 0.0) || !std::isfinite(skew)) throw ConfigError("zipf skew must be finite and >= 0");

    std::vector<double> cdf(n_nodes);
    double acc = 0.0;
    for (std::size_t r = 0; r < n_nodes; ++r) {
        acc += std::pow(static_cast<double>(r + 1), -skew);
        cdf[r] = acc;
    }
    for (double& c : cdf) c /= acc;
    cdf.back() = 1.0;

    std::mt19937_64 gen(seed);
    auto draw = [&] {
        const double u = detail::uniform_unit(gen);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return static_cast<NodeId>(std::min<std::size_t>(it - cdf.begin(), n_nodes - 1));
    };
    std::vector<Edge> edges(n_edges);
    for (Edge& e : edges) {
        e.src = draw();
        e.dst = draw();
    }
    std::ostringstream name;
    name << "zipf:" << n_nodes << ':' << n_edges << ':' << skew << ':' << seed;
    return GraphStream(std::move(edges), n_nodes, name.str());
}

ExactOracle::ExactOracle(std::span<const Edge> stream) {
    for (const Edge& e : stream) add(e);
}

void ExactOracle::add(const Edge& e) {
    ++total_;
    auto& f = edge_freq_[pack_pair(e.src, e.dst)];
    const std::size_t need = std::size_t{std::max(e.src, e.dst)} + 1;
    if (out_freq_.size() < need) {
        out_freq_.resize(need, 0);
        adjacency_.resize(need);
    }
    ++out_freq_[e.src];
    if (f++ == 0) {
        auto& adj = adjacency_[e.src];
        adj.insert(std::lower_bound(adj.begin(), adj.end(), e.dst), e.dst);
    }
}

std::uint64_t ExactOracle::edge_freq(NodeId src, NodeId dst) const {
    const auto it = edge_freq_.find(pack_pair(src, dst));
    return it == edge_freq_.end() ? 0 : it->second;
}

std::uint64_t ExactOracle::node_out_freq(NodeId v) const {
    return v < out_freq_.size() ? out_freq_[v] : 0;
}

std::span<const NodeId> ExactOracle::neighbors(NodeId v) const {
    if (v >= adjacency_.size()) return {};
    return adjacency_[v];
}

bool ExactOracle::reachable(NodeId a, NodeId b) const {
    if (a == b) return true;
    if (a >= adjacency_.size()) return false;
    std::vector<char> seen(adjacency_.size(), 0);
    std::deque<NodeId> frontier{a};
    seen[a] = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (NodeId v : adjacency_[u]) {
            if (v == b) return true;
            if (!seen[v]) {
                seen[v] = 1;
                frontier.push_back(v);
            }
        }
    }
    return false;
}

}  // namespace kmx
