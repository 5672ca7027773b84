#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kmx {

/// Invalid parameters or configuration values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A memory budget cannot hold the requested sketch layout.
class InfeasibleBudget : public std::runtime_error {
public:
    InfeasibleBudget(std::uint64_t requested, std::uint64_t minimal, const std::string& what)
        : std::runtime_error(what + " (budget " + std::to_string(requested) +
                             " bytes, minimal feasible " + std::to_string(minimal) + " bytes)"),
          requested_(requested),
          minimal_(minimal) {}

    std::uint64_t requested_bytes() const noexcept { return requested_; }
    std::uint64_t minimal_bytes() const noexcept { return minimal_; }

private:
    std::uint64_t requested_;
    std::uint64_t minimal_;
};

}  // namespace kmx
