#include "vcantor_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

#include "vcantor/vcantor.hpp"

namespace vcantor::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  const RunConfig& config;
  const RunOptions& options;
  std::string command;
  std::ostream& out;
  std::ostream& err;

  [[nodiscard]] fs::path path(const std::string& name) const { return options.out_dir / name; }
};

json meta(const Context& ctx) {
  return {{"command", ctx.command},
          {"config_hash", config_hash(ctx.config)},
          {"seed", ctx.config.seed},
          {"versions", {{"vcantor", kVersion}, {"schema", kSchema}}},
          {"level", ctx.config.level},
          {"splits", ctx.config.splits}};
}

std::string csv_banner(const Context& ctx) {
  return "# vcantor " + std::string(kVersion) + " command=" + ctx.command + " config=" + config_hash(ctx.config) +
         " seed=" + std::to_string(ctx.config.seed) + "\n";
}

void write_json(const fs::path& p, const json& doc) {
  std::ofstream f(p);
  f << doc.dump(2) << '\n';
}

std::ofstream open_csv(const Context& ctx, const std::string& name) {
  std::ofstream f(ctx.path(name));
  f << csv_banner(ctx);
  return f;
}

json violations_json(const ValidationReport& report) {
  json arr = json::array();
  for (const auto& v : report.violations) {
    arr.push_back({{"code", v.code},
                   {"system", v.system ? json(*v.system) : json(nullptr)},
                   {"map", v.map ? json(*v.map) : json(nullptr)},
                   {"message", v.message}});
  }
  return arr;
}

json extrema_json(const ScaleExtrema& e) {
  return {{"r_inf", e.r_inf}, {"r_sup", e.r_sup}, {"m_inf", e.m_inf}, {"m_sup", e.m_sup}, {"eta", e.eta}};
}

json report_json(const ExponentReport& r) {
  json evals = json::array();
  for (const auto& e : r.evaluations) evals.push_back({{"x", e.x}, {"f", e.f}, {"se", e.se}});
  json trace = json::array();
  for (const auto& s : r.trace) trace.push_back({s.lo, s.hi});
  return {{"method", to_string(r.method)}, {"gamma", r.gamma},     {"gamma_se", r.gamma_se},
          {"tolerance", r.tolerance},      {"evaluations", evals}, {"bisection", trace},
          {"blocks", r.blocks},            {"seed", r.seed}};
}

VTree make_tree(const RunConfig& c) {
  Xoshiro256ss rng(tree_seed(c.seed));
  return build_tree(c.catalog, c.V, c.depth, c.root_type, rng, TreeOptions{c.node_cap});
}

CellDecomposition make_decomposition(const RunConfig& c, const VTree& tree) {
  return refine_uniform(decompose(tree, c.level), c.splits, c.node_cap);
}

std::vector<double> config_grid(const RunConfig& c) { return geometric_grid(c.grid.x_lo, c.grid.x_hi, c.grid.count); }

bool single_system(const Catalog& c) {
  std::size_t active = 0;
  for (double p : c.probabilities) active += p > 0.0 ? 1 : 0;
  return active == 1;
}

int cmd_validate(const Context& ctx) {
  const auto report = validate_catalog(ctx.config.catalog);
  json doc = {{"meta", meta(ctx)}, {"valid", report.valid()}, {"violations", violations_json(report)}};
  doc["extrema"] = report.extrema ? extrema_json(*report.extrema) : json(nullptr);
  write_json(ctx.path("validation.json"), doc);
  if (!report.valid()) {
    ctx.err << violations_json(report).dump(2) << '\n';
    return 1;
  }
  ctx.out << "catalog valid: " << ctx.config.catalog.systems.size() << " system(s), eta=" << report.extrema->eta
          << '\n';
  return 0;
}

int cmd_tree(const Context& ctx) {
  const VTree tree = make_tree(ctx.config);
  {
    std::ofstream f(ctx.path("tree.jsonl"));
    write_tree_jsonl(f, tree);
  }
  {
    std::ofstream f(ctx.path("environments.json"));
    f << environments_to_json(tree.environments()) << '\n';
  }
  json sizes = json::array();
  for (std::size_t g = 0; g <= tree.depth(); ++g) sizes.push_back(tree.generation(g).size());
  json neck_rows = json::array();
  std::size_t previous = 0;
  for (std::size_t n : tree.neck_levels()) {
    neck_rows.push_back({{"level", n}, {"gap", n - previous}, {"type", tree.generation(n).front().type + 1}});
    previous = n;
  }
  write_json(ctx.path("tree.json"), {{"meta", meta(ctx)},
                                     {"V", tree.V()},
                                     {"depth", tree.depth()},
                                     {"root_type", tree.root_type() + 1},
                                     {"generation_sizes", sizes},
                                     {"node_count", tree.node_count()},
                                     {"necks", neck_rows}});
  ctx.out << "tree: depth " << tree.depth() << ", " << tree.node_count() << " nodes, " << tree.neck_levels().size()
          << " neck level(s)\n";
  return 0;
}

int cmd_measure(const Context& ctx) {
  const VTree tree = make_tree(ctx.config);
  const auto dec = decompose(tree, ctx.config.level);
  {
    auto f = open_csv(ctx, "cells.csv");
    write_cells_csv(f, dec);
  }
  {
    auto f = open_csv(ctx, "gaps.csv");
    write_gaps_csv(f, dec);
  }
  ctx.out << "measure: level " << dec.level << ", " << dec.cells.size() << " cells, " << dec.gaps.size()
          << " gaps, total mass " << format_real(dec.total_mass()) << '\n';
  return 0;
}

int cmd_count(const Context& ctx) {
  const VTree tree = make_tree(ctx.config);
  const auto dec = make_decomposition(ctx.config, tree);
  const auto pd = assemble(dec, Boundary::Dirichlet);
  const auto pn = assemble(dec, Boundary::Neumann);
  const auto xs = config_grid(ctx.config);
  const auto nd = counting_function(pd, xs, ctx.options.threads);
  const auto nn = counting_function(pn, xs, ctx.options.threads);
  {
    auto f = open_csv(ctx, "counting.csv");
    write_counting_csv(f, nd, nn);
  }
  {
    auto f = open_csv(ctx, "pencil_dirichlet.csv");
    write_pencil_csv(f, pd);
  }
  {
    auto f = open_csv(ctx, "pencil_neumann.csv");
    write_pencil_csv(f, pn);
  }
  ctx.out << "count: " << xs.size() << " grid points, N_D(x_hi)=" << nd.back().count
          << ", N_N(x_hi)=" << nn.back().count << '\n';
  return 0;
}

int cmd_exponent(const Context& ctx) {
  const auto& c = ctx.config;
  json doc = {{"meta", meta(ctx)}};

  const auto homogeneous = solve_gamma_homogeneous(c.catalog);
  const bool exact_applies = c.V == 1 || single_system(c.catalog);
  doc["exact"] = exact_applies ? report_json(homogeneous) : json(nullptr);
  doc["homogeneous_reference"] = homogeneous.gamma;
  doc["recursive_oracle"] = solve_gamma_recursive(c.catalog);

  MonteCarloOptions mc;
  mc.threads = ctx.options.threads;
  const auto mc_report = solve_gamma_monte_carlo(c.catalog, c.V, c.blocks, monte_carlo_seed(c.seed), c.mc_tolerance,
                                                 std::max<std::size_t>(c.blocks * 16, 1'000'000), mc);
  json mc_doc = report_json(mc_report);
  {
    NeckBlockSample sample(c.catalog, c.V, mc_report.blocks, monte_carlo_seed(c.seed), mc);
    mc_doc["mean_neck_level"] = sample.mean_neck_level();
    json by_type = json::array();
    for (const auto& v : sample.f_by_start_type(mc_report.gamma)) {
      by_type.push_back({{"f", std::isnan(v.value) ? json(nullptr) : json(v.value)},
                         {"se", std::isnan(v.se) ? json(nullptr) : json(v.se)}});
    }
    mc_doc["f_at_gamma_by_start_type"] = by_type;
  }
  doc["monte_carlo"] = mc_doc;
  doc["gamma"] = exact_applies ? homogeneous.gamma : mc_report.gamma;

  const VTree tree = make_tree(c);
  const auto dec = make_decomposition(c, tree);
  const auto pd = assemble(dec, Boundary::Dirichlet);
  const auto pn = assemble(dec, Boundary::Neumann);
  try {
    const auto window = c.window ? *c.window : default_window(pd);
    const auto xs = geometric_grid(window.first, window.second, std::max<std::size_t>(c.grid.count, 8));
    const auto samples = counting_function(pd, xs, ctx.options.threads);
    const auto neumann = counting_function(pn, xs, ctx.options.threads);
    // slope of (N_D + N_N)/2; one-sided slopes kept as diagnostics
    const auto fit = empirical_exponent(samples, neumann, window.first, window.second);
    doc["empirical"] = {{"slope", fit.slope},       {"intercept", fit.intercept}, {"residual", fit.residual},
                        {"window", {fit.x_lo, fit.x_hi}}, {"points", fit.points}};
    try {
      doc["empirical"]["dirichlet_slope"] = empirical_exponent(samples, window.first, window.second).slope;
      doc["empirical"]["neumann_slope"] = empirical_exponent(neumann, window.first, window.second).slope;
    } catch (const Error&) {
    }
    auto f = open_csv(ctx, "exponent_residual.csv");
    f << "x,N_D,residual\n";
    for (const auto& s : samples) {
      f << format_real(s.x) << ',' << s.count << ','
        << (s.count > 0 ? format_real(std::log(static_cast<double>(s.count)) - doc["gamma"].get<double>() * std::log(s.x))
                        : std::string("nan"))
        << '\n';
    }
  } catch (const Error& e) {
    doc["empirical"] = {{"error", e.what()}};
  }
  write_json(ctx.path("exponent.json"), doc);
  ctx.out << "exponent: gamma=" << format_real(doc["gamma"].get<double>()) << " (MC " << format_real(mc_report.gamma)
          << " +- " << format_real(mc_report.gamma_se) << ")\n";
  return 0;
}

int cmd_bracket(const Context& ctx) {
  const auto& c = ctx.config;
  const VTree tree = make_tree(c);
  const auto xs = config_grid(c);
  json results = json::array();
  std::size_t failures = 0;
  for (std::size_t k = c.k_lo; k <= c.k_hi; ++k) {
    const auto r = bracketing_check(tree, k, xs, c.level, c.splits, ctx.options.threads);
    failures += r.failures;
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"x", row.x},
                      {"lower", row.lower},
                      {"N_D", row.n_d},
                      {"N_N", row.n_n},
                      {"upper", row.upper},
                      {"status", to_string(row.status)}});
    }
    results.push_back({{"k", r.k},
                       {"members", r.members},
                       {"member_levels", r.member_levels},
                       {"warnings", r.warnings},
                       {"failures", r.failures},
                       {"passed", r.passed()},
                       {"rows", rows}});
  }
  write_json(ctx.path("bracket.json"), {{"meta", meta(ctx)}, {"results", results}});
  ctx.out << "bracket: k=" << c.k_lo << ".." << c.k_hi << ", " << failures << " failure(s)\n";
  return failures == 0 ? 0 : 3;
}

int cmd_cutsets(const Context& ctx) {
  const auto& c = ctx.config;
  const VTree tree = make_tree(c);
  const auto pd = assemble(make_decomposition(c, tree), Boundary::Dirichlet);
  const auto stats = cutset_stats_check(tree, c.k_lo, c.k_hi, &pd);
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  auto f = open_csv(ctx, "cutsets.csv");
  f << "k,M,T,y,min_product,max_product,lower_bound,upper_bound,chain_holds,covers,mass\n";
  bool all_ok = true;
  for (const auto& s : stats) {
    all_ok = all_ok && s.chain_holds && s.covers;
    rows.push_back({{"k", s.k},
                    {"M", s.M},
                    {"T", s.T},
                    {"y", s.y},
                    {"min_product", s.min_product},
                    {"max_product", s.max_product},
                    {"lower_bound", s.lower_bound},
                    {"upper_bound", s.upper_bound},
                    {"chain_holds", s.chain_holds},
                    {"covers", s.covers},
                    {"mass", s.mass},
                    {"nd_at_T_over_M", opt(s.nd_at_T_over_M)},
                    {"M_over_nd_at_scaled_T", opt(s.M_over_nd_at_scaled_T)}});
    f << s.k << ',' << s.M << ',' << format_real(s.T) << ',' << s.y << ',' << format_real(s.min_product) << ','
      << format_real(s.max_product) << ',' << format_real(s.lower_bound) << ',' << format_real(s.upper_bound) << ','
      << (s.chain_holds ? 1 : 0) << ',' << (s.covers ? 1 : 0) << ',' << format_real(s.mass) << '\n';
  }
  write_json(ctx.path("cutsets.json"), {{"meta", meta(ctx)}, {"rows", rows}});
  ctx.out << "cutsets: k=" << c.k_lo << ".." << c.k_hi << (all_ok ? ", all chains hold\n" : ", CHAIN VIOLATED\n");
  return all_ok ? 0 : 3;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string_view>& subcommands() {
  static const std::vector<std::string_view> names = {"validate", "tree",   "measure", "count",
                                                      "exponent", "bracket", "cutsets"};
  return names;
}

std::uint64_t tree_seed(std::uint64_t master) { return derive_stream_seed(master, 0); }
std::uint64_t monte_carlo_seed(std::uint64_t master) { return derive_stream_seed(master, 1); }

int run(std::string_view subcommand, const RunConfig& config, const RunOptions& options) {
  Context ctx{config, options, std::string(subcommand), options.out ? *options.out : std::cout,
              options.err ? *options.err : std::cerr};
  const auto started = std::chrono::steady_clock::now();
  int status = 0;
  try {
    fs::create_directories(options.out_dir);
    if (subcommand != "validate") {
      const auto report = validate_catalog(config.catalog);
      if (!report.valid()) {
        ctx.err << violations_json(report).dump(2) << '\n';
        return 1;
      }
    }
    if (subcommand == "validate") status = cmd_validate(ctx);
    else if (subcommand == "tree") status = cmd_tree(ctx);
    else if (subcommand == "measure") status = cmd_measure(ctx);
    else if (subcommand == "count") status = cmd_count(ctx);
    else if (subcommand == "exponent") status = cmd_exponent(ctx);
    else if (subcommand == "bracket") status = cmd_bracket(ctx);
    else if (subcommand == "cutsets") status = cmd_cutsets(ctx);
    else {
      ctx.err << "unknown subcommand '" << subcommand << "'\n";
      return 64;
    }
  } catch (const Error& e) {
    ctx.err << ctx.command << ": " << e.what() << '\n';
    return 2;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_json(ctx.path(ctx.command + ".meta.json"), {{"command", ctx.command},
                                                    {"timestamp", utc_timestamp()},
                                                    {"wall_seconds", seconds},
                                                    {"threads", options.threads},
                                                    {"status", status}});
  return status;
}

}  // namespace vcantor::cli
