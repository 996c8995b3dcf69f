#include "vcantor/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "neumaier.hpp"
#include "vcantor/error.hpp"
#include "vcantor/measure.hpp"
#include "vcantor/parallel.hpp"

namespace vcantor {

// ---------------------------------------------------------------------------
// Exponent functions

double f_exact_homogeneous(const Catalog& catalog, double x) {
  double f = 0.0;
  for (std::size_t j = 0; j < catalog.systems.size(); ++j) {
    const double p = catalog.probabilities[j];
    if (p == 0.0) continue;
    const auto& sys = catalog.systems[j];
    double sum = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) sum += std::pow(sys.maps[i].ratio * sys.weights[i], x);
    f += p * std::log(sum);
  }
  return f;
}

double recursive_moment(const Catalog& catalog, double x) {
  double moment = 0.0;
  for (std::size_t j = 0; j < catalog.systems.size(); ++j) {
    const auto& sys = catalog.systems[j];
    double sum = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) sum += std::pow(sys.maps[i].ratio * sys.weights[i], x);
    moment += catalog.probabilities[j] * sum;
  }
  return moment;
}

namespace {

FValue mean_and_se(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// (r_i m_i)^x for every map of every system.
std::vector<std::vector<double>> scale_powers(const Catalog& catalog, double x) {
  std::vector<std::vector<double>> table(catalog.systems.size());
  for (std::size_t j = 0; j < catalog.systems.size(); ++j) {
    const auto& sys = catalog.systems[j];
    table[j].resize(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) table[j][i] = std::pow(sys.maps[i].ratio * sys.weights[i], x);
  }
  return table;
}

double block_log_sum(const NeckBlock& block, std::size_t V, const std::vector<std::vector<double>>& powers,
                     std::vector<double>& weight, std::vector<double>& next) {
  std::fill(weight.begin(), weight.end(), 0.0);
  weight[block.start_type] = 1.0;
  for (const auto& env : block.environments) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t v = 0; v < V; ++v) {
      if (weight[v] == 0.0) continue;
      const auto& row = env.rows[v];
      const auto& pw = powers[row.system];
      for (std::size_t i = 0; i < pw.size(); ++i) next[row.child_types[i]] += weight[v] * pw[i];
    }
    std::swap(weight, next);
  }
  double total = 0.0;
  for (double w : weight) total += w;
  return std::log(total);
}

}  // namespace

NeckBlockSample::NeckBlockSample(Catalog catalog, std::size_t V, std::size_t blocks, std::uint64_t seed,
                                 MonteCarloOptions options)
    : catalog_(std::move(catalog)), V_(V), seed_(seed), options_(options) {
  if (V_ == 0) throw Error(ErrorKind::ArgumentError, "V must be at least 1");
  extend(blocks);
}

void NeckBlockSample::extend(std::size_t total) {
  const std::size_t start = blocks_.size();
  if (total <= start) return;
  blocks_.resize(total);
  parallel_for(total - start, options_.threads, [&](std::size_t offset) {
    const std::size_t b = start + offset;
    Xoshiro256ss rng(derive_stream_seed(seed_, b));
    NeckBlock block;
    block.start_type = static_cast<std::uint32_t>(rng.uniform_index(V_));
    while (true) {
      if (block.environments.size() >= options_.neck_cap) {
        throw Error(ErrorKind::NeckTimeout, "block " + std::to_string(b) + " saw no neck within " +
                                                std::to_string(options_.neck_cap) + " environments");
      }
      block.environments.push_back(sample_environment(catalog_, V_, rng));
      if (block.environments.back().is_neck) break;
    }
    blocks_[b] = std::move(block);
  });
}

double NeckBlockSample::mean_neck_level() const {
  double sum = 0.0;
  for (const auto& b : blocks_) sum += static_cast<double>(b.environments.size());
  return blocks_.empty() ? 0.0 : sum / static_cast<double>(blocks_.size());
}

std::vector<double> NeckBlockSample::block_log_sums(double x) const {
  const auto powers = scale_powers(catalog_, x);
  std::vector<double> out(blocks_.size());
  std::vector<double> weight(V_), next(V_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) out[b] = block_log_sum(blocks_[b], V_, powers, weight, next);
  return out;
}

FValue NeckBlockSample::f(double x) const {
  const auto values = block_log_sums(x);
  return mean_and_se(values);
}

std::vector<FValue> NeckBlockSample::f_by_start_type(double x) const {
  const auto values = block_log_sums(x);
  std::vector<std::vector<double>> by_type(V_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) by_type[blocks_[b].start_type].push_back(values[b]);
  std::vector<FValue> out;
  out.reserve(V_);
  for (const auto& v : by_type) out.push_back(mean_and_se(v));
  return out;
}

FValue f_monte_carlo(const Catalog& catalog, std::size_t V, double x, std::size_t blocks, std::uint64_t seed,
                     MonteCarloOptions options) {
  if (blocks < 2) throw Error(ErrorKind::ArgumentError, "at least two blocks are required");
  if (!(x > 0.0)) throw Error(ErrorKind::ArgumentError, "x must be positive");
  return NeckBlockSample(catalog, V, blocks, seed, options).f(x);
}

// ---------------------------------------------------------------------------
// Root finding

std::string_view to_string(GammaMethod method) {
  switch (method) {
    case GammaMethod::ExactHomogeneous: return "exact-homogeneous";
    case GammaMethod::ExactSelfSimilar: return "exact-selfsimilar";
    case GammaMethod::MonteCarloNeck: return "monte-carlo-neck";
    case GammaMethod::RecursiveOracle: return "recursive-oracle";
  }
  return "unknown";
}

ExponentReport solve_gamma(const Evaluator& f, GammaMethod method, SolveOptions options, const Refiner& refine) {
  ExponentReport report;
  report.method = method;
  report.tolerance = options.tolerance;

  auto eval = [&](double x) {
    const FValue v = f(x);
    if (std::isnan(v.value)) throw Error(ErrorKind::InvalidInput, "exponent function returned NaN");
    report.evaluations.push_back({x, v.value, v.se});
    return v;
  };
  auto clearly_positive = [&](const FValue& v) { return v.value > options.z * v.se; };
  auto clearly_negative = [&](const FValue& v) { return v.value < -options.z * v.se; };

  double lo = 1.0;
  double hi = 1.0;
  for (std::size_t attempt = 0;; ++attempt) {
    lo = 1.0;
    FValue flo = eval(lo);
    std::size_t steps = 0;
    bool ok = true;
    while (!clearly_positive(flo)) {
      if (++steps > options.max_bracket_steps) {
        ok = false;
        break;
      }
      lo *= 0.5;
      flo = eval(lo);
    }
    hi = lo;
    FValue fhi = flo;
    steps = 0;
    while (ok && !clearly_negative(fhi)) {
      if (++steps > options.max_bracket_steps) {
        ok = false;
        break;
      }
      if (clearly_positive(fhi)) lo = hi;
      hi *= 2.0;
      fhi = eval(hi);
    }
    if (ok) break;
    if (!refine || attempt >= options.max_refinements || !refine()) {
      throw NoisyRoot("could not bracket the root with clear signs", lo, hi);
    }
  }

  report.trace.push_back({lo, hi});
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (eval(mid).value > 0.0) lo = mid;
    else hi = mid;
    report.trace.push_back({lo, hi});
  }
  report.gamma = 0.5 * (lo + hi);

  const FValue at_root = f(report.gamma);
  if (at_root.se > 0.0) {
    const double h = std::max(1e-4, 10.0 * options.tolerance);
    const double slope = (f(report.gamma + h).value - f(report.gamma - h).value) / (2.0 * h);
    report.gamma_se = at_root.se / std::abs(slope);
  }
  return report;
}

ExponentReport solve_gamma_homogeneous(const Catalog& catalog, double tolerance) {
  std::size_t active = 0;
  for (double p : catalog.probabilities) active += p > 0.0 ? 1 : 0;
  const auto method = active == 1 ? GammaMethod::ExactSelfSimilar : GammaMethod::ExactHomogeneous;
  SolveOptions options;
  options.tolerance = tolerance;
  return solve_gamma([&](double x) { return FValue{f_exact_homogeneous(catalog, x), 0.0}; }, method, options);
}

double solve_gamma_recursive(const Catalog& catalog, double tolerance) {
  SolveOptions options;
  options.tolerance = tolerance;
  return solve_gamma([&](double x) { return FValue{std::log(recursive_moment(catalog, x)), 0.0}; },
                     GammaMethod::RecursiveOracle, options)
      .gamma;
}

ExponentReport solve_gamma_monte_carlo(const Catalog& catalog, std::size_t V, std::size_t blocks, std::uint64_t seed,
                                       double tolerance, std::size_t max_blocks, MonteCarloOptions options) {
  if (blocks < 2) throw Error(ErrorKind::ArgumentError, "at least two blocks are required");
  NeckBlockSample sample(catalog, V, blocks, seed, options);
  SolveOptions solve;
  solve.tolerance = tolerance;
  auto report = solve_gamma([&](double x) { return sample.f(x); }, GammaMethod::MonteCarloNeck, solve, [&] {
    if (sample.size() >= max_blocks) return false;
    sample.extend(std::min(max_blocks, 2 * sample.size()));
    return true;
  });
  report.blocks = sample.size();
  report.seed = seed;
  return report;
}

// ---------------------------------------------------------------------------
// Empirical exponent

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 2) {
    throw Error(ErrorKind::ArgumentError, "geometric grid needs 0 < lo <= hi and count >= 2");
  }
  std::vector<double> xs(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) xs[i] = lo * std::exp(step * static_cast<double>(i));
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

namespace {

EmpiricalExponent fit_log_log(const std::vector<double>& xs, const std::vector<double>& counts, double x_lo,
                              double x_hi) {
  if (xs.size() < 8) {
    throw Error(ErrorKind::InsufficientData,
                std::to_string(xs.size()) + " sample(s) with N >= 1 in the window, at least 8 required");
  }
  if (*std::min_element(counts.begin(), counts.end()) == *std::max_element(counts.begin(), counts.end())) {
    throw Error(ErrorKind::InsufficientData, "counting function is constant on the window");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(counts[i]));
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  EmpiricalExponent fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  fit.points = lx.size();
  return fit;
}

}  // namespace

EmpiricalExponent empirical_exponent(std::span<const CountingSample> samples, double x_lo, double x_hi) {
  std::vector<double> xs, counts;
  for (const auto& s : samples) {
    if (s.x < x_lo || s.x > x_hi || s.count == 0) continue;
    xs.push_back(s.x);
    counts.push_back(static_cast<double>(s.count));
  }
  return fit_log_log(xs, counts, x_lo, x_hi);
}

EmpiricalExponent empirical_exponent(std::span<const CountingSample> dirichlet, std::span<const CountingSample> neumann,
                                     double x_lo, double x_hi) {
  if (dirichlet.size() != neumann.size()) {
    throw Error(ErrorKind::ArgumentError, "Dirichlet and Neumann samples differ in length");
  }
  std::vector<double> xs, counts;
  for (std::size_t i = 0; i < dirichlet.size(); ++i) {
    const auto& d = dirichlet[i];
    if (d.x != neumann[i].x) throw Error(ErrorKind::ArgumentError, "Dirichlet and Neumann samples on different grids");
    if (d.x < x_lo || d.x > x_hi || d.count == 0) continue;
    xs.push_back(d.x);
    counts.push_back(0.5 * static_cast<double>(d.count + neumann[i].count));
  }
  return fit_log_log(xs, counts, x_lo, x_hi);
}

std::pair<double, double> default_window(const Pencil& dirichlet) {
  if (dirichlet.dimension() == 0) throw Error(ErrorKind::InsufficientData, "pencil has no unknowns");
  const double first = eigenvalue(dirichlet, 1);
  const double top = eigenvalue(dirichlet, dirichlet.dimension());
  return {10.0 * first, 0.01 * top};
}

// ---------------------------------------------------------------------------
// Verification suites

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Warning: return "warning";
    case CheckStatus::Fail: return "fail";
  }
  return "unknown";
}

namespace {

struct PencilPair {
  Pencil dirichlet;
  Pencil neumann;
};

PencilPair pencils_for(const VTree& tree, std::size_t level, std::size_t splits) {
  const auto dec = refine_uniform(decompose(tree, level), splits);
  return {assemble(dec, Boundary::Dirichlet), assemble(dec, Boundary::Neumann)};
}

std::size_t violation(const BracketingRow& row) {
  std::size_t worst = 0;
  if (row.lower > row.n_d) worst = std::max(worst, row.lower - row.n_d);
  if (row.n_d > row.n_n) worst = std::max(worst, row.n_d - row.n_n);
  if (row.n_n > row.upper) worst = std::max(worst, row.n_n - row.upper);
  return worst;
}

}  // namespace

BracketingResult bracketing_check(const VTree& tree, std::size_t k, std::span<const double> xs, std::size_t level,
                                  std::size_t splits, std::size_t threads) {
  if (level > tree.depth()) {
    throw DepthExhausted("bracketing level " + std::to_string(level) + " exceeds tree depth", level - tree.depth());
  }
  const CutSet cut = cut_set(tree, k);
  BracketingResult result;
  result.k = k;
  result.level = level;
  result.splits = splits;
  result.members = cut.M;

  std::map<std::size_t, std::vector<double>> products_by_level;
  for (const auto& mem : cut.members) products_by_level[mem.generation].push_back(mem.product);
  const std::size_t deepest = products_by_level.rbegin()->first;
  if (deepest > level) {
    throw DepthExhausted("cut set reaches generation " + std::to_string(deepest) + " beyond level " +
                             std::to_string(level),
                         deepest - level);
  }

  const PencilPair centre = pencils_for(tree, level, splits);
  // Subtrees rooted on one neck level are identical, so one pencil pair per level suffices.
  std::vector<std::pair<PencilPair, const std::vector<double>*>> parts;
  for (const auto& [g, products] : products_by_level) {
    result.member_levels.push_back(g);
    const VTree sub = tree.subtree(g, tree.generation(g).front().type);
    parts.emplace_back(pencils_for(sub, level - g, splits), &products);
  }

  result.rows.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t q) {
    BracketingRow row;
    row.x = xs[q];
    row.n_d = inertia_count(centre.dirichlet, row.x);
    row.n_n = inertia_count(centre.neumann, row.x);
    for (const auto& [pencils, products] : parts) {
      for (double p : *products) {
        row.lower += inertia_count(pencils.dirichlet, p * row.x);
        row.upper += inertia_count(pencils.neumann, p * row.x);
      }
    }
    result.rows[q] = row;
  });

  for (std::size_t q = 0; q < result.rows.size(); ++q) {
    auto& row = result.rows[q];
    const std::size_t v = violation(row);
    if (v == 0) continue;
    const bool left_clean = q == 0 || violation(result.rows[q - 1]) == 0;
    const bool right_clean = q + 1 == result.rows.size() || violation(result.rows[q + 1]) == 0;
    if (v == 1 && left_clean && right_clean) {
      row.status = CheckStatus::Warning;
      ++result.warnings;
    } else {
      row.status = CheckStatus::Fail;
      ++result.failures;
    }
  }
  return result;
}

std::vector<CutSetStats> cutset_stats_check(const VTree& tree, std::size_t k_lo, std::size_t k_hi,
                                            const Pencil* dirichlet, double alpha) {
  const auto ext = scale_extrema(tree.catalog());
  std::vector<CutSetStats> out;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const CutSet cut = cut_set(tree, k);
    CutSetStats s;
    s.k = k;
    s.M = cut.M;
    s.T = cut.T;
    s.y = cut.y;
    s.min_product = cut.min_product;
    s.max_product = cut.max_product;
    s.upper_bound = std::exp(-static_cast<double>(k));
    s.lower_bound = std::pow(ext.eta, static_cast<double>(cut.y)) * s.upper_bound;
    s.chain_holds = true;
    detail::Neumaier mass;
    for (const auto& mem : cut.members) {
      mass.add(tree.node(mem.generation, mem.index).m);
      if (mem.product > s.upper_bound || mem.product < s.lower_bound * (1.0 - kChainSlack)) s.chain_holds = false;
    }
    s.mass = mass.value();
    s.covers = covers_exactly_once(tree, cut);
    if (dirichlet != nullptr) {
      const auto at_T = inertia_count(*dirichlet, s.T);
      s.nd_at_T_over_M = static_cast<double>(at_T) / static_cast<double>(s.M);
      const double scaled = std::pow(static_cast<double>(k), alpha) * s.T;
      const auto at_scaled = inertia_count(*dirichlet, scaled);
      if (at_scaled > 0) s.M_over_nd_at_scaled_T = static_cast<double>(s.M) / static_cast<double>(at_scaled);
    }
    out.push_back(s);
  }
  return out;
}

FirstEigenvalueCheck first_eigenvalue_bounds(const Pencil& dirichlet, const Catalog& catalog) {
  const auto ext = scale_extrema(catalog);
  const double len = catalog.base.length();
  FirstEigenvalueCheck c;
  c.lambda1 = eigenvalue(dirichlet, 1);
  c.lower = 1.0 / len;
  const double denom = ext.r_inf * ext.m_inf * (1.0 - ext.r_sup);
  c.upper = (1.0 - ext.r_inf * ext.r_inf) / (denom * denom * len);
  c.lower_holds = c.lambda1 >= c.lower;
  c.upper_holds = c.lambda1 <= c.upper;
  return c;
}

bool linear_bound_holds(std::size_t count, double x, const Interval& base) {
  return static_cast<double>(count) <= 0.25 * base.length() * x;
}

}  // namespace vcantor
