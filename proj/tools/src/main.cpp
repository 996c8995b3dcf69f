#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vcantor/error.hpp"
#include "vcantor_cli/commands.hpp"
#include "vcantor_cli/run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral asymptotics of Krein-Feller operators for V-variable Cantor measures"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  const std::map<std::string_view, std::string> about = {
      {"validate", "check the catalog and report r_inf, m_inf, eta"},
      {"tree", "grow a tree and dump environments, nodes and necks"},
      {"measure", "write the level-n cells and gaps"},
      {"count", "Dirichlet and Neumann counting functions on the grid"},
      {"exponent", "gamma from f (exact or Monte Carlo) and the empirical slope"},
      {"bracket", "check the cut-set bracketing of N_D"},
      {"cutsets", "cut-set sizes, mass and the product chain"},
  };
  for (auto name : vcantor::cli::subcommands()) {
    auto* sub = app.add_subcommand(std::string(name), about.at(name));
    sub->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const auto* chosen = app.get_subcommands().front();
  std::ifstream file(config_path);
  std::stringstream text;
  text << file.rdbuf();

  vcantor::cli::RunConfig config;
  try {
    config = vcantor::cli::parse_run_config(text.str());
  } catch (const vcantor::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  if (chosen->count("--seed") > 0) config.seed = seed;

  vcantor::cli::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  return vcantor::cli::run(chosen->get_name(), config, options);
}
