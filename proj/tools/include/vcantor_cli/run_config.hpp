#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vcantor/catalog.hpp"

namespace vcantor::cli {

inline constexpr std::string_view kSchema = "vcantor.run/1";

struct GridSpec {
  double x_lo = 1.0;
  double x_hi = 1e4;
  std::size_t count = 64;
};

/// Everything a run needs. (config, seed) determines every numeric output.
struct RunConfig {
  Catalog catalog;
  std::size_t V = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> root_type;  // 0-based; the document uses 1..V
  std::size_t depth = 8;
  std::size_t level = 8;
  std::size_t splits = 1;
  std::size_t k_lo = 0;
  std::size_t k_hi = 3;
  GridSpec grid;
  std::size_t blocks = 10'000;
  std::optional<std::pair<double, double>> window;
  std::size_t node_cap = 10'000'000;
  double mc_tolerance = 1e-3;
};

/// Parses and checks a config document. Unknown fields, a wrong schema tag and
/// non-positive counts are rejected with Error(ConfigError). `level` defaults to `depth`.
RunConfig parse_run_config(std::string_view text);

/// Canonical JSON (sorted keys) of the effective configuration.
std::string canonical_json(const RunConfig& config);

/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace vcantor::cli
