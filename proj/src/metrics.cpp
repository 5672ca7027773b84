#include "kmx/metrics.hpp"

#include "kmx/error.hpp"

namespace kmx {

double relative_error(const QueryOutcome& o) {
    if (o.truth == 0) throw ConfigError("relative error is undefined for a zero true frequency");
    // Subtract before dividing so that e.g. 12 vs 10 yields exactly 0.2.
    return (static_cast<double>(o.estimate) - static_cast<double>(o.truth)) / static_cast<double>(o.truth);
}

double average_relative_error(std::span<const QueryOutcome> outcomes) {
    if (outcomes.empty()) throw ConfigError("average relative error of an empty query set");
    long double sum = 0.0L;
    for (const QueryOutcome& o : outcomes) sum += relative_error(o);
    return static_cast<double>(sum / static_cast<long double>(outcomes.size()));
}

std::size_t effective_queries(std::span<const QueryOutcome> outcomes, std::uint64_t g0) noexcept {
    std::size_t n = 0;
    for (const QueryOutcome& o : outcomes) {
        const std::uint64_t err = o.estimate > o.truth ? o.estimate - o.truth : o.truth - o.estimate;
        if (err <= g0) ++n;
    }
    return n;
}

double percentage_effective(std::span<const QueryOutcome> outcomes, std::uint64_t g0) {
    if (outcomes.empty()) throw ConfigError("percentage of effective queries of an empty query set");
    return 100.0 * static_cast<double>(effective_queries(outcomes, g0)) / static_cast<double>(outcomes.size());
}

}  // namespace kmx
