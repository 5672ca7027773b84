#pragma once

#include <cstdint>
#include <span>

namespace kmx {

/// Estimated and exact answer of one frequency query.
struct QueryOutcome {
    std::uint64_t estimate = 0;
    std::uint64_t truth = 0;
};

/// estimate / truth - 1. Throws ConfigError when truth == 0.
double relative_error(const QueryOutcome& o);

/// Mean relative error. Throws ConfigError on an empty list.
double average_relative_error(std::span<const QueryOutcome> outcomes);

/// Number of outcomes with |estimate - truth| <= g0.
std::size_t effective_queries(std::span<const QueryOutcome> outcomes, std::uint64_t g0) noexcept;

/// effective_queries as a percentage of the list. Throws on an empty list.
double percentage_effective(std::span<const QueryOutcome> outcomes, std::uint64_t g0);

}  // namespace kmx
