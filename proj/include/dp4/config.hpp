#pragma once

// Run configuration: flag > DP4_* environment variable > default.

#include "dp4/integer.hpp"
#include "dp4/local.hpp"

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

namespace dp4 {

struct Config {
    std::int64_t height_bound = 100;
    int precision_cap = 12;
    std::uint64_t dirichlet_cap = 1'000'000;
    std::uint64_t tuple_cap = 10'000'000;

    SearchLimits limits() const { return SearchLimits{precision_cap, tuple_cap, dirichlet_cap}; }
};

namespace detail {

inline std::optional<std::int64_t> env_integer(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    Integer n = parse_integer(v);
    if (n <= 0 || !fits_int64(n)) throw std::invalid_argument(std::string(name) + " must be a positive integer");
    return static_cast<std::int64_t>(n);
}

} // namespace detail

/// Defaults overridden by DP4_HEIGHT_BOUND, DP4_PRECISION_CAP, DP4_DIRICHLET_CAP, DP4_TUPLE_CAP.
inline Config config_from_environment() {
    Config c;
    if (auto v = detail::env_integer("DP4_HEIGHT_BOUND")) c.height_bound = *v;
    if (auto v = detail::env_integer("DP4_PRECISION_CAP")) c.precision_cap = static_cast<int>(*v);
    if (auto v = detail::env_integer("DP4_DIRICHLET_CAP")) c.dirichlet_cap = static_cast<std::uint64_t>(*v);
    if (auto v = detail::env_integer("DP4_TUPLE_CAP")) c.tuple_cap = static_cast<std::uint64_t>(*v);
    return c;
}

} // namespace dp4
