#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "vcantor_cli/run_config.hpp"

namespace vcantor::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::size_t threads = 1;
  std::ostream* out = nullptr;  // summary lines; defaults to std::cout
  std::ostream* err = nullptr;  // diagnostics; defaults to std::cerr
};

/// validate, tree, measure, count, exponent, bracket, cutsets
const std::vector<std::string_view>& subcommands();

/// Runs one subcommand and writes its files into options.out_dir. Scientific outputs
/// carry the config hash, seed and version; wall-clock data goes to <command>.meta.json.
/// Returns the process exit status; library errors are reported on `err` with status 2,
/// an invalid catalog with status 1.
int run(std::string_view subcommand, const RunConfig& config, const RunOptions& options);

/// Stream seeds: the tree uses stream 0 of the master seed, Monte Carlo blocks use
/// stream 1 as their own master.
std::uint64_t tree_seed(std::uint64_t master);
std::uint64_t monte_carlo_seed(std::uint64_t master);

}  // namespace vcantor::cli
