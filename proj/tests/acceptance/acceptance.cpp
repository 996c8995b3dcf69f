// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vcantor/vcantor.hpp"

using namespace vcantor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

VTree random_tree(const Catalog& c, std::size_t V, std::size_t depth, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  return build_tree(c, V, depth, std::nullopt, rng);
}

Catalog cantor_on(double a, double b) {
  Catalog c;
  c.base = {a, b};
  c.systems.push_back({{{1.0 / 3.0, a - a / 3.0}, {1.0 / 3.0, b - b / 3.0}}, {0.5, 0.5}});
  c.probabilities = {1.0};
  return c;
}

// Weights of a generation-n node recomputed from its ancestry and the catalog.
double path_mass(const VTree& tree, std::size_t g, std::size_t i) {
  double m = 1.0;
  for (; g > 0; --g) {
    const auto& n = tree.node(g, i);
    const auto& parent = tree.node(g - 1, n.parent);
    m *= tree.catalog().systems[parent.system].weights[n.child_position];
    i = n.parent;
  }
  return m;
}

Outcome weyl_baseline() {
  const auto start = std::chrono::steady_clock::now();
  const auto tree = random_tree(catalogs::lebesgue_halves(), 1, 12, 0);
  const auto dec = decompose(tree, 12);
  const auto p = assemble(dec, Boundary::Dirichlet);
  const double lambda1 = eigenvalue(p, 1);
  const auto xs = geometric_grid(1e2, 1e4, 32);
  const auto fit =
      empirical_exponent(counting_function(p, xs), counting_function(assemble(dec, Boundary::Neumann), xs), 1e2, 1e4);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double rel = std::abs(lambda1 - pi2) / pi2;
  Outcome o;
  o.pass = rel <= 0.01 && std::abs(fit.slope - 0.5) <= 0.03 && seconds < 10.0;
  o.detail = fmt("lambda1=%.8f (rel err %.2e), (N_D+N_N)/2 slope=%.4f over [1e2,1e4], %.2f s", lambda1, rel, fit.slope, seconds);
  return o;
}

Outcome cantor_self_similar() {
  const double exact = std::log(2.0) / std::log(6.0);
  const auto report = solve_gamma_homogeneous(catalogs::cantor());
  const auto tree = random_tree(catalogs::cantor(), 1, 12, 0);
  const auto dec = decompose(tree, 12);
  const auto p = assemble(dec, Boundary::Dirichlet);
  const auto [lo, hi] = default_window(p);
  const auto xs = geometric_grid(lo, hi, 64);
  const auto fit =
      empirical_exponent(counting_function(p, xs), counting_function(assemble(dec, Boundary::Neumann), xs), lo, hi);
  Outcome o;
  o.pass = std::abs(report.gamma - exact) <= 1e-10 && std::abs(fit.slope - exact) <= 0.05;
  o.detail = fmt("gamma=%.12f (err %.1e), level-12 (N_D+N_N)/2 slope=%.4f on [%.3g, %.3g]", report.gamma,
                 std::abs(report.gamma - exact), fit.slope, lo, hi);
  return o;
}

Outcome homogeneous_consistency() {
  const auto c = catalogs::cantor_and_fifths();
  NeckBlockSample sample(c, 1, 10'000, derive_stream_seed(2024, 1));
  Outcome o;
  double worst = 0.0;
  for (double x : {0.1, 0.25, 0.4, 0.7, 1.2}) {
    const auto v = sample.f(x);
    const double z = std::abs(v.value - f_exact_homogeneous(c, x)) / v.se;
    worst = std::max(worst, z);
    if (z > 3.0) o.pass = false;
  }
  const auto exact = solve_gamma_homogeneous(c);
  const auto mc = solve_gamma_monte_carlo(c, 1, 10'000, derive_stream_seed(2024, 1), 1e-6);
  const double half_width = 3.0 * mc.gamma_se + mc.tolerance;
  const bool inside = std::abs(mc.gamma - exact.gamma) <= half_width;
  o.pass = o.pass && inside;
  o.detail = fmt("max |f_mc - f|/SE = %.2f over 5 x; gamma_mc=%.6f +- %.1e, exact %.6f", worst, mc.gamma,
                 half_width, exact.gamma);
  return o;
}

Outcome factorization() {
  Outcome o;
  double worst = 0.0;
  std::size_t skipped = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t V = 1 + t % 3;
    const auto grown = V == 1 ? fixture::GrownTree{random_tree(catalogs::cantor_and_fifths(), 1, 10, t), 0}
                              : fixture::tree_with_necks(fixture::skewed_pair(), V, V == 2 ? 2 : 1, t, V == 2 ? 18 : 20);
    skipped += grown.rejected;
    const auto& tree = grown.tree;
    const std::size_t k = tree.neck_levels().size();
    for (double x : {0.2, 0.5, 1.1}) {
      const auto s = scale_sum_at_neck(tree, x, k);
      const double rel = std::abs(s.factorized_sum - s.direct_sum) / s.direct_sum;
      worst = std::max(worst, rel);
      if (!(rel <= 1e-10)) o.pass = false;
    }
  }
  o.detail = fmt("50 trees x 3 x, worst relative gap %.2e (%zu short streams regrown)", worst, skipped);
  return o;
}

Outcome measure_exactness() {
  Outcome o;
  double worst_cell = 0.0;
  double worst_total = 0.0;
  double worst_cut = 0.0;
  std::size_t cuts = 0;
  for (std::uint64_t t = 0; t < 12; ++t) {
    const std::size_t V = 1 + t % 3;
    const Catalog c = t % 2 == 0 ? fixture::skewed_pair() : catalogs::cantor_and_fifths();
    const auto tree = random_tree(c, V, 12, 7000 + t);
    const auto d = decompose(tree, 12);
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
      const auto& cell = d.cells[i];
      const double m = path_mass(tree, 12, cell.node);
      worst_cell = std::max(worst_cell, std::abs(measure_of_interval(d, cell.left, cell.right) - m));
      worst_cell = std::max(worst_cell, std::abs(cell.density() * cell.length() - m));
    }
    worst_total = std::max(worst_total, std::abs(d.total_mass() - 1.0));
    for (std::size_t k = 0;; ++k) {
      CutSet cut;
      try {
        cut = cut_set(tree, k);
      } catch (const DepthExhausted&) {
        break;
      }
      long double mass = 0.0L;
      for (const auto& mem : cut.members) mass += path_mass(tree, mem.generation, mem.index);
      worst_cut = std::max(worst_cut, std::abs(static_cast<double>(mass) - 1.0));
      ++cuts;
    }
  }
  o.pass = worst_cell <= 1e-12 && worst_total <= 1e-12 && worst_cut <= 1e-12;
  o.detail = fmt("12 trees at n=12: cell err %.1e, total err %.1e, %zu cut sets with mass err %.1e", worst_cell,
                 worst_total, cuts, worst_cut);
  return o;
}

Outcome bracketing() {
  Outcome o;
  std::size_t warnings = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  const auto xs = geometric_grid(1.0, 1e6, 16);
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto grown = fixture::tree_reaching_cut(fixture::skewed_pair(), 2, 3, 100 + t, 18);
    skipped += grown.rejected;
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto r = bracketing_check(grown.tree, k, xs, grown.tree.depth(), 1);
      warnings += r.warnings;
      failures += r.failures;
    }
  }
  o.pass = failures == 0;
  o.detail = fmt("10 V=2 trees, k=1..3, 16 points: %zu failures, %zu warnings (%zu deep streams regrown)", failures,
                 warnings, skipped);
  return o;
}

Outcome eigenvalue_bounds() {
  Outcome o;
  std::size_t instances = 0;
  std::size_t samples = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<VTree> trees;
  trees.push_back(random_tree(catalogs::lebesgue_halves(), 1, 10, 0));
  trees.push_back(random_tree(catalogs::cantor(), 1, 10, 0));
  trees.push_back(random_tree(cantor_on(2.0, 5.0), 1, 9, 0));
  for (std::uint64_t t = 0; t < 15; ++t) {
    const Catalog c = t % 2 == 0 ? fixture::skewed_pair() : catalogs::cantor_and_fifths();
    trees.push_back(random_tree(c, 1 + t % 3, 9, 300 + t));
  }
  for (const auto& tree : trees) {
    for (std::size_t splits : {1u, 4u}) {
      const auto d = refine_uniform(decompose(tree, tree.depth()), splits);
      const auto pd = assemble(d, Boundary::Dirichlet);
      const auto pn = assemble(d, Boundary::Neumann);
      const auto check = first_eigenvalue_bounds(pd, tree.catalog());
      min_margin = std::min(min_margin, check.lambda1 * d.base.length());
      if (!check.lower_holds) o.pass = false;
      for (double x : geometric_grid(0.1, 1e8, 40)) {
        const auto nd = inertia_count(pd, x);
        const auto nn = inertia_count(pn, x);
        if (!linear_bound_holds(nd, x, d.base)) o.pass = false;
        if (nn < nd || nn > nd + 2) o.pass = false;
        ++samples;
      }
      ++instances;
    }
  }
  o.detail = fmt("%zu instances, %zu shifts: min lambda1*(b-a)=%.3f", instances, samples, min_margin);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Xoshiro256ss rng(derive_stream_seed(8, 0));
  std::size_t mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = 1 + rng.uniform_index(8);
    const auto p = oracle::random_pencil(dim, rng);
    const auto ev = oracle::dense_eigenvalues(p);
    const double lo = std::log(ev.front()) - 1.0;
    const double hi = std::log(ev.back()) + 1.0;
    for (int s = 0; s < 20; ++s) {
      const double x = std::exp(lo + (hi - lo) * rng.uniform01());
      if (inertia_count(p, x) != oracle::dense_count(p, x)) ++mismatches;
    }
  }
  o.pass = mismatches == 0;
  o.detail = fmt("100 pencils x 20 shifts, %zu mismatches", mismatches);
  return o;
}

Outcome cutset_chain() {
  Outcome o;
  std::size_t cuts = 0;
  std::size_t members = 0;
  std::size_t violations = 0;
  std::vector<VTree> trees;
  trees.push_back(random_tree(catalogs::cantor(), 1, 14, 0));
  trees.push_back(random_tree(catalogs::cantor_and_fifths(), 1, 10, 1));
  for (std::uint64_t t = 0; t < 10; ++t) {
    trees.push_back(fixture::tree_reaching_cut(fixture::skewed_pair(), 2, 3, 900 + t, 18).tree);
  }
  for (const auto& tree : trees) {
    const double eta = scale_extrema(tree.catalog()).eta;
    for (std::size_t k = 0;; ++k) {
      CutSet cut;
      try {
        cut = cut_set(tree, k);
      } catch (const DepthExhausted&) {
        break;
      }
      const double upper = std::exp(-static_cast<double>(k));
      const double lower = std::pow(eta, static_cast<double>(cut.y)) * upper;
      for (const auto& mem : cut.members) {
        const double p = tree.node(mem.generation, mem.index).rm();
        if (p > upper || p < lower) ++violations;
        ++members;
      }
      ++cuts;
    }
  }
  o.pass = violations == 0;
  o.detail = fmt("%zu cut sets, %zu members, %zu violations", cuts, members, violations);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"weyl-baseline", weyl_baseline},
      {"cantor-self-similar", cantor_self_similar},
      {"homogeneous-consistency", homogeneous_consistency},
      {"factorization-identity", factorization},
      {"measure-exactness", measure_exactness},
      {"bracketing", bracketing},
      {"eigenvalue-bounds", eigenvalue_bounds},
      {"oracle-equivalence", oracle_equivalence},
      {"cutset-chain", cutset_chain},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
