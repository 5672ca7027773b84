#include "kmx/composite.hpp"

#include "kmx/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

namespace kmx {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

GSketch GSketch::build(std::span<const Edge> sample, std::uint64_t total_bytes, std::uint32_t depth,
                       std::uint64_t seed, const PlannerOptions& options) {
    const auto start = Clock::now();
    GSketch sk;
    sk.plan_ = kmx::plan(estimate_stats(sample), total_bytes, depth, Geometry::countmin, options);
    const std::size_t n = sk.plan_.partitions().size();
    sk.locals_.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::uint32_t w = i < n ? sk.plan_.partitions()[i].width : sk.plan_.residual().width;
        sk.locals_.emplace_back(w, depth, derive_seed(seed, i));
    }
    sk.updates_.assign(n + 1, 0);
    sk.init_seconds_ = seconds_since(start);
    return sk;
}

KMatrix KMatrix::build(std::span<const Edge> sample, std::uint64_t total_bytes, std::uint32_t depth,
                       std::uint64_t seed, const PlannerOptions& options) {
    const auto start = Clock::now();
    KMatrix sk;
    sk.plan_ = kmx::plan(estimate_stats(sample), total_bytes, depth, Geometry::matrix, options);
    const std::size_t n = sk.plan_.partitions().size();
    sk.locals_.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::uint32_t w = i < n ? sk.plan_.partitions()[i].width : sk.plan_.residual().width;
        sk.locals_.emplace_back(MatrixKind::gmatrix, w, depth, derive_seed(seed, i));
    }
    sk.updates_.assign(n + 1, 0);
    for (const Edge& e : sample) {
        sk.remember(e.src);
        sk.remember(e.dst);
    }
    sk.init_seconds_ = seconds_since(start);
    return sk;
}

bool KMatrix::search(NodeId a, const NodeId* target, std::vector<char>* reached) const {
    const std::size_t n = dictionary_.size();
    std::vector<char> visited(n, 0);
    // Buckets of every candidate under each local family, filled on demand.
    std::vector<std::vector<std::uint32_t>> buckets(locals_.size());
    std::vector<std::uint64_t> masks;
    std::deque<NodeId> frontier{a};

    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        const std::size_t p = plan_.route(u);
        const MatrixSketch& local = locals_[p];
        const std::uint32_t d = local.depth();
        const std::size_t words = kernels::mask_words(local.width());

        auto& cache = buckets[p];
        if (cache.empty()) {
            cache.resize(n * d);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::uint32_t r = 0; r < d; ++r) {
                    cache[i * d + r] = local.family().bucket_unchecked(r, dictionary_[i]);
                }
            }
        }
        local.row_masks(u, masks);

        for (std::size_t i = 0; i < n; ++i) {
            if (visited[i]) continue;
            bool arc = true;
            for (std::uint32_t r = 0; r < d && arc; ++r) {
                const std::uint32_t c = cache[i * d + r];
                arc = (masks[r * words + c / 64] >> (c % 64)) & 1u;
            }
            if (!arc) continue;
            visited[i] = 1;
            if (target != nullptr && dictionary_[i] == *target) return true;
            frontier.push_back(dictionary_[i]);
        }
    }
    if (reached != nullptr) *reached = std::move(visited);
    return false;
}

bool KMatrix::query_reachable(NodeId a, NodeId b) const {
    if (a == b) return true;
    if (b >= seen_.size() || !seen_[b]) return false;
    return search(a, &b, nullptr);
}

std::vector<NodeId> KMatrix::reachable_set(NodeId a) const {
    std::vector<char> visited;
    search(a, nullptr, &visited);
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < dictionary_.size(); ++i) {
        if (visited[i]) out.push_back(dictionary_[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace kmx
