#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vcantor/assembly.hpp"
#include "vcantor/catalog.hpp"
#include "vcantor/eigensolve.hpp"
#include "vcantor/vtree.hpp"

namespace vcantor {

// ---------------------------------------------------------------------------
// Exponent functions

/// Value of an exponent function together with its Monte Carlo standard error
/// (zero for deterministic evaluators).
struct FValue {
  double value = 0.0;
  double se = 0.0;
};

/// V = 1 case: sum_j p_j log sum_i (r_i^(j) m_i^(j))^x. With a single system this is
/// the self-similar exponent function.
double f_exact_homogeneous(const Catalog& catalog, double x);

/// sum_j p_j sum_i (r_i^(j) m_i^(j))^x; the recursive exponent solves moment = 1.
double recursive_moment(const Catalog& catalog, double x);

/// One neck block: a start type followed by environments up to and including the first neck.
struct NeckBlock {
  std::uint32_t start_type = 0;
  std::vector<Environment> environments;
};

struct MonteCarloOptions {
  std::size_t neck_cap = 100'000;  // environments per block before NeckTimeout
  std::size_t threads = 1;
};

/// Independent neck blocks drawn once and reused for every x (common random numbers),
/// which makes the estimate strictly decreasing in x.
///
/// Block b is generated from Xoshiro256ss(derive_stream_seed(seed, b)): one
/// uniform_index(V) draw for the start type, then environments until a neck occurs.
class NeckBlockSample {
 public:
  NeckBlockSample(Catalog catalog, std::size_t V, std::size_t blocks, std::uint64_t seed,
                  MonteCarloOptions options = {});

  [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
  [[nodiscard]] std::size_t V() const noexcept { return V_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const std::vector<NeckBlock>& blocks() const noexcept { return blocks_; }
  [[nodiscard]] double mean_neck_level() const;

  /// log sum over the first neck generation of (m r)^x, one entry per block.
  [[nodiscard]] std::vector<double> block_log_sums(double x) const;

  /// Sample mean and standard error (sample std / sqrt(B)) of block_log_sums.
  [[nodiscard]] FValue f(double x) const;

  /// Same statistics restricted to blocks of each start type (empty types give se = NaN).
  [[nodiscard]] std::vector<FValue> f_by_start_type(double x) const;

  /// Appends blocks until there are `total`, continuing the stream numbering.
  void extend(std::size_t total);

 private:
  Catalog catalog_;
  std::size_t V_;
  std::uint64_t seed_;
  MonteCarloOptions options_;
  std::vector<NeckBlock> blocks_;
};

FValue f_monte_carlo(const Catalog& catalog, std::size_t V, double x, std::size_t blocks, std::uint64_t seed,
                     MonteCarloOptions options = {});

// ---------------------------------------------------------------------------
// Root finding

enum class GammaMethod { ExactHomogeneous, ExactSelfSimilar, MonteCarloNeck, RecursiveOracle };

std::string_view to_string(GammaMethod method);

struct Evaluation {
  double x = 0.0;
  double f = 0.0;
  double se = 0.0;
};

struct BisectionStep {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExponentReport {
  GammaMethod method = GammaMethod::ExactHomogeneous;
  double gamma = 0.0;
  double gamma_se = 0.0;  // SE-propagated: se(f(gamma)) / |f'(gamma)|
  double tolerance = 0.0;
  std::vector<Evaluation> evaluations;
  std::vector<BisectionStep> trace;
  std::size_t blocks = 0;
  std::uint64_t seed = 0;
};

struct SolveOptions {
  double tolerance = 1e-10;
  double z = 2.0;                 // sign of f must clear z * se at the bracket ends
  std::size_t max_refinements = 4;
  std::size_t max_bracket_steps = 200;
};

using Evaluator = std::function<FValue(double)>;
/// Asks the evaluator for more samples; returns false when it cannot.
using Refiner = std::function<bool()>;

/// Root of a strictly decreasing f on (0, inf). The bracket is grown by doubling or
/// halving from x = 1 until both ends have clear signs, then bisected to tolerance.
ExponentReport solve_gamma(const Evaluator& f, GammaMethod method, SolveOptions options = {},
                           const Refiner& refine = {});

/// Deterministic root of f_exact_homogeneous (tagged self-similar for a single system).
ExponentReport solve_gamma_homogeneous(const Catalog& catalog, double tolerance = 1e-10);

/// Root of recursive_moment(x) = 1.
double solve_gamma_recursive(const Catalog& catalog, double tolerance = 1e-10);

/// Monte Carlo root from neck blocks; doubles the block count (up to max_blocks) when
/// noise makes a bracket sign ambiguous.
ExponentReport solve_gamma_monte_carlo(const Catalog& catalog, std::size_t V, std::size_t blocks, std::uint64_t seed,
                                       double tolerance = 1e-3, std::size_t max_blocks = 1'000'000,
                                       MonteCarloOptions options = {});

// ---------------------------------------------------------------------------
// Empirical exponent

struct EmpiricalExponent {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log-log fit residuals
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t points = 0;
};

/// count points from lo to hi inclusive, equally spaced in log x.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

/// Least-squares slope of log N against log x over samples in [x_lo, x_hi] with N >= 1.
/// Throws InsufficientData with fewer than 8 such samples or a single distinct count.
EmpiricalExponent empirical_exponent(std::span<const CountingSample> samples, double x_lo, double x_hi);

/// Same fit applied to (N_D + N_N) / 2 on a shared grid, over points with N_D >= 1.
/// The two counts differ by at most the number of gaps plus two and straddle the
/// smooth part of N, so the midpoint is far less biased on short windows.
EmpiricalExponent empirical_exponent(std::span<const CountingSample> dirichlet, std::span<const CountingSample> neumann,
                                     double x_lo, double x_hi);

/// [10 * lambda_1, 0.01 * lambda_max] of a Dirichlet pencil.
std::pair<double, double> default_window(const Pencil& dirichlet);

// ---------------------------------------------------------------------------
// Verification suites

enum class CheckStatus { Pass, Warning, Fail };

std::string_view to_string(CheckStatus status);

struct BracketingRow {
  double x = 0.0;
  std::size_t lower = 0;  // sum over Lambda_k of subtree N_D at r m x
  std::size_t n_d = 0;
  std::size_t n_n = 0;
  std::size_t upper = 0;  // sum over Lambda_k of subtree N_N at r m x
  CheckStatus status = CheckStatus::Pass;
};

struct BracketingResult {
  std::size_t k = 0;
  std::size_t level = 0;
  std::size_t splits = 1;
  std::size_t members = 0;
  std::vector<std::size_t> member_levels;  // distinct neck levels occupied by Lambda_k
  std::vector<BracketingRow> rows;
  std::size_t warnings = 0;
  std::size_t failures = 0;

  [[nodiscard]] bool passed() const noexcept { return failures == 0; }
};

/// Checks lower <= N_D <= N_N <= upper on the grid. The centre pencils use the tree at
/// `level`; each member subtree is resolved at level - |ii| so both sides share one mesh.
/// A violation by exactly one at an isolated grid point is a warning, anything else fails.
BracketingResult bracketing_check(const VTree& tree, std::size_t k, std::span<const double> xs, std::size_t level,
                                  std::size_t splits, std::size_t threads = 1);

struct CutSetStats {
  std::size_t k = 0;
  std::size_t M = 0;
  double T = 1.0;
  std::size_t y = 0;
  double min_product = 1.0;
  double max_product = 1.0;
  double lower_bound = 0.0;  // eta^y e^{-k}
  double upper_bound = 1.0;  // e^{-k}
  bool chain_holds = false;
  bool covers = false;
  double mass = 0.0;  // sum of m_ii over the members
  std::optional<double> nd_at_T_over_M;
  std::optional<double> M_over_nd_at_scaled_T;
};

/// Relative slack on the lower half of the chain, absorbing rounding in the products.
inline constexpr double kChainSlack = 1e-12;

/// Cut-set statistics for k in [k_lo, k_hi]. When a Dirichlet pencil of the tree is given,
/// the diagnostic ratios N_D(T_k)/M_k and M_k/N_D(k^alpha T_k) are filled in.
std::vector<CutSetStats> cutset_stats_check(const VTree& tree, std::size_t k_lo, std::size_t k_hi,
                                            const Pencil* dirichlet = nullptr, double alpha = 1.0);

struct FirstEigenvalueCheck {
  double lambda1 = 0.0;
  double lower = 0.0;  // 1 / (b - a)
  double upper = 0.0;  // (1 - r_inf^2) / ((r_inf m_inf (1 - r_sup))^2 (b - a))
  bool lower_holds = false;
  bool upper_holds = false;
};

FirstEigenvalueCheck first_eigenvalue_bounds(const Pencil& dirichlet, const Catalog& catalog);

/// N_D(x) <= mu([a,b]) (b - a) / 4 * x with mu a probability measure.
bool linear_bound_holds(std::size_t count, double x, const Interval& base);

}  // namespace vcantor
