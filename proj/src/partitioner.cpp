#include "kmx/partitioner.hpp"

#include "kmx/error.hpp"
#include "kmx/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace kmx {

VertexStats::VertexStats(std::vector<VertexStat> stats) : stats_(std::move(stats)) {
    std::sort(stats_.begin(), stats_.end(), [](const VertexStat& a, const VertexStat& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < stats_.size(); ++i) {
        if (i > 0 && stats_[i - 1].id == stats_[i].id) throw ConfigError("duplicate vertex in statistics");
        if (stats_[i].distinct == 0 || stats_[i].freq < stats_[i].distinct) {
            throw ConfigError("vertex statistics need 1 <= distinct <= freq");
        }
    }
}

const VertexStat* VertexStats::find(NodeId v) const noexcept {
    const auto it = std::lower_bound(stats_.begin(), stats_.end(), v,
                                     [](const VertexStat& s, NodeId id) { return s.id < id; });
    return it != stats_.end() && it->id == v ? &*it : nullptr;
}

const VertexStat& VertexStats::at(NodeId v) const {
    const VertexStat* s = find(v);
    if (s == nullptr) throw ConfigError("vertex " + std::to_string(v) + " has no sampled statistics");
    return *s;
}

std::uint64_t VertexStats::total_freq(std::span<const NodeId> vertices) const {
    std::uint64_t total = 0;
    for (NodeId v : vertices) total += at(v).freq;
    return total;
}

VertexStats estimate_stats(std::span<const Edge> sample) {
    if (sample.empty()) throw ConfigError("cannot estimate statistics from an empty sample");
    std::unordered_map<NodeId, std::unordered_set<NodeId>> dests;
    std::unordered_map<NodeId, std::uint64_t> freq;
    for (const Edge& e : sample) {
        ++freq[e.src];
        dests[e.src].insert(e.dst);
    }
    std::vector<VertexStat> stats;
    stats.reserve(freq.size());
    for (const auto& [v, f] : freq) {
        stats.push_back({v, f, static_cast<std::uint32_t>(dests[v].size())});
    }
    return VertexStats(std::move(stats));
}

double expected_error(std::span<const NodeId> vertices, const VertexStats& stats, std::uint32_t width) {
    if (width == 0) throw ConfigError("sketch width must be >= 1");
    const auto total = static_cast<double>(stats.total_freq(vertices));
    const double w = width;
    double first = 0.0;
    double second = 0.0;
    for (NodeId v : vertices) {
        const VertexStat& s = stats.at(v);
        first += s.distinct * total / (w * s.avg());
        second += s.distinct / w;
    }
    return first - second;
}

namespace {

// Sum over S of d(m) * F(S) / (f(m)/d(m)) for one side of a split.
double side_cost(std::span<const NodeId> side, const VertexStats& stats) {
    const auto total = static_cast<double>(stats.total_freq(side));
    double cost = 0.0;
    for (NodeId v : side) {
        const VertexStat& s = stats.at(v);
        cost += s.distinct * total / s.avg();
    }
    return cost;
}

}  // namespace

double split_cost(std::span<const NodeId> s1, std::span<const NodeId> s2, const VertexStats& stats) {
    std::unordered_set<NodeId> seen;
    for (NodeId v : s1) {
        if (!seen.insert(v).second) throw ConfigError("vertex listed twice in split side");
    }
    for (NodeId v : s2) {
        if (!seen.insert(v).second) throw ConfigError("split sides overlap at vertex " + std::to_string(v));
    }
    return side_cost(s1, stats) + side_cost(s2, stats);
}

std::uint32_t width_for(Geometry geometry, std::uint64_t bytes, std::uint32_t depth) {
    return geometry == Geometry::matrix ? matrix_dims_from_memory(bytes, depth) : cm_dims_from_memory(bytes, depth);
}

std::uint64_t bytes_for(Geometry geometry, std::uint32_t width, std::uint32_t depth) noexcept {
    const std::uint64_t w = width;
    return kCounterBytes * depth * (geometry == Geometry::matrix ? w * w : w);
}

std::uint64_t PartitionPlan::allocated_bytes() const noexcept {
    std::uint64_t total = bytes_for(geometry_, residual_.width, depth_);
    for (const Partition& p : partitions_) total += bytes_for(geometry_, p.width, depth_);
    return total;
}

std::uint64_t PartitionPlan::granularity_slack() const noexcept {
    auto step = [&](std::uint32_t w) {
        return bytes_for(geometry_, w + 1, depth_) - bytes_for(geometry_, w, depth_);
    };
    std::uint64_t total = step(residual_.width);
    for (const Partition& p : partitions_) total += step(p.width);
    return total;
}

namespace {

std::uint64_t residual_budget(std::uint64_t total, double fraction, std::uint64_t unit) {
    const auto share = static_cast<std::uint64_t>(std::floor(static_cast<double>(total) * fraction));
    return std::max(share, unit);
}

std::uint64_t minimal_feasible(std::uint64_t data_min, std::uint64_t unit, double fraction) {
    auto b = static_cast<std::uint64_t>(std::ceil(static_cast<double>(data_min) / (1.0 - fraction)));
    b = std::max(b, data_min + unit);
    while (b - residual_budget(b, fraction, unit) < data_min) ++b;
    return b;
}

struct Segment {
    std::size_t lo;
    std::size_t hi;
    std::uint64_t budget;
};

}  // namespace

PartitionPlan plan(const VertexStats& stats, std::uint64_t total_bytes, std::uint32_t depth, Geometry geometry,
                   const PlannerOptions& options) {
    if (depth == 0) throw ConfigError("sketch depth must be >= 1");
    if (options.min_width == 0) throw ConfigError("min_width must be >= 1");
    if (options.max_partitions == 0) throw ConfigError("max_partitions must be >= 1");
    if (!(options.residual_fraction >= 0.0 && options.residual_fraction < 1.0)) {
        throw ConfigError("residual_fraction must lie in [0, 1)");
    }
    if (stats.size() == 0) throw ConfigError("cannot plan without sampled vertices");

    const std::uint64_t unit = bytes_for(geometry, 1, depth);
    const std::uint64_t data_min = bytes_for(geometry, options.min_width, depth);
    const std::uint64_t residual_bytes = residual_budget(total_bytes, options.residual_fraction, unit);
    if (total_bytes < residual_bytes + data_min) {
        throw InfeasibleBudget(total_bytes, minimal_feasible(data_min, unit, options.residual_fraction),
                               "budget cannot hold the residual sketch and one partition of min_width");
    }

    PartitionPlan result;
    result.depth_ = depth;
    result.geometry_ = geometry;
    result.total_bytes_ = total_bytes;
    result.residual_.budget_bytes = residual_bytes;
    result.residual_.width = width_for(geometry, residual_bytes, depth);

    // Planning order: average edge frequency descending, then id ascending.
    std::vector<const VertexStat*> order;
    order.reserve(stats.size());
    for (const VertexStat& s : stats.all()) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const VertexStat* a, const VertexStat* b) {
        // avg a > avg b  <=>  fa*db > fb*da, compared exactly in integers.
        const auto lhs = static_cast<unsigned __int128>(a->freq) * b->distinct;
        const auto rhs = static_cast<unsigned __int128>(b->freq) * a->distinct;
        return lhs != rhs ? lhs > rhs : a->id < b->id;
    });
    std::vector<NodeId> ids(order.size());
    std::transform(order.begin(), order.end(), ids.begin(), [](const VertexStat* s) { return s->id; });

    // Prefix sums of F and of Q = sum d^2/f, so any contiguous side costs F*Q.
    const std::size_t n = order.size();
    std::vector<std::uint64_t> pf(n + 1, 0);
    std::vector<double> pq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = order[i]->distinct;
        pf[i + 1] = pf[i] + order[i]->freq;
        pq[i + 1] = pq[i] + d * d / static_cast<double>(order[i]->freq);
    }
    auto approx_cost = [&](std::size_t lo, std::size_t hi) {
        return static_cast<double>(pf[hi] - pf[lo]) * (pq[hi] - pq[lo]);
    };
    auto slice = [&](std::size_t lo, std::size_t hi) {
        return std::span<const NodeId>(ids.data() + lo, hi - lo);
    };

    std::vector<Segment> leaves;
    std::deque<Segment> queue{{0, n, total_bytes - residual_bytes}};
    std::size_t count = 1;
    while (!queue.empty()) {
        const Segment seg = queue.front();
        queue.pop_front();
        const std::uint64_t left_budget = seg.budget / 2;
        const bool splittable = seg.hi - seg.lo >= 2 && count + 1 <= options.max_partitions &&
                                width_for(geometry, left_budget, depth) >= options.min_width;
        if (!splittable) {
            leaves.push_back(seg);
            continue;
        }
        std::size_t best = seg.lo + 1;
        double best_cost = approx_cost(seg.lo, best) + approx_cost(best, seg.hi);
        for (std::size_t k = seg.lo + 2; k < seg.hi; ++k) {
            const double c = approx_cost(seg.lo, k) + approx_cost(k, seg.hi);
            if (c < best_cost) {
                best_cost = c;
                best = k;
            }
        }
        // Accept on costs evaluated directly, not from prefix differences.
        const double split = split_cost(slice(seg.lo, best), slice(best, seg.hi), stats);
        const double whole = split_cost(slice(seg.lo, seg.hi), {}, stats);
        if (!(split < whole)) {
            leaves.push_back(seg);
            continue;
        }
        result.splits_.push_back({seg.hi - seg.lo, best - seg.lo, whole, split});
        queue.push_back({seg.lo, best, left_budget});
        queue.push_back({best, seg.hi, seg.budget - left_budget});
        ++count;
    }

    std::sort(leaves.begin(), leaves.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    const NodeId max_id = stats.all().back().id;
    result.assignment_.assign(std::size_t{max_id} + 1, PartitionPlan::kUnassigned);
    for (const Segment& seg : leaves) {
        Partition p;
        p.vertices.assign(ids.begin() + static_cast<std::ptrdiff_t>(seg.lo),
                          ids.begin() + static_cast<std::ptrdiff_t>(seg.hi));
        p.budget_bytes = seg.budget;
        p.width = width_for(geometry, seg.budget, depth);
        p.sum_freq = pf[seg.hi] - pf[seg.lo];
        for (NodeId v : p.vertices) result.assignment_[v] = static_cast<std::uint32_t>(result.partitions_.size());
        result.partitions_.push_back(std::move(p));
    }
    return result;
}

void write_plan(std::ostream& out, const PartitionPlan& plan) {
    out << "# partition width bytes vertices sum_freq\n";
    for (std::size_t i = 0; i < plan.partitions().size(); ++i) {
        const Partition& p = plan.partitions()[i];
        out << i << ' ' << p.width << ' ' << p.budget_bytes << ' ' << p.vertices.size() << ' ' << p.sum_freq << '\n';
    }
    const Partition& r = plan.residual();
    out << "residual " << r.width << ' ' << r.budget_bytes << " 0 0\n";
}

}  // namespace kmx
