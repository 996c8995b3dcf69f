#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace vcantor {

/// Closed base interval [a, b].
struct Interval {
  double a = 0.0;
  double b = 1.0;

  [[nodiscard]] double length() const noexcept { return b - a; }
  bool operator==(const Interval&) const = default;
};

/// Affine contraction S(x) = ratio * x + offset.
struct ContractionMap {
  double ratio = 0.5;
  double offset = 0.0;

  [[nodiscard]] double operator()(double x) const noexcept { return ratio * x + offset; }
  bool operator==(const ContractionMap&) const = default;
};

/// One iterated function system together with its weight vector.
struct WeightedIFS {
  std::vector<ContractionMap> maps;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return maps.size(); }
  bool operator==(const WeightedIFS&) const = default;
};

/// Extremal ratios and weights over every map of every system; eta = r_inf * m_inf.
struct ScaleExtrema {
  double r_inf = 0.0;
  double r_sup = 0.0;
  double m_inf = 0.0;
  double m_sup = 0.0;
  double eta = 0.0;
};

/// Indexed family of weighted IFSs on a common base interval plus the distribution
/// from which a system is drawn for each type and level.
struct Catalog {
  Interval base;
  std::vector<WeightedIFS> systems;
  std::vector<double> probabilities;

  [[nodiscard]] std::size_t max_branching() const noexcept;
  bool operator==(const Catalog&) const = default;
};

struct Violation {
  std::string code;
  std::optional<std::size_t> system;
  std::optional<std::size_t> map;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::optional<ScaleExtrema> extrema;  // present iff the catalog is valid

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
};

/// Absolute tolerance on the unit sums of weight and probability vectors.
inline constexpr double kUnitSumTolerance = 1e-12;

/// Checks the ordering chain of every system, the ratio and weight ranges, the unit
/// sums and the index distribution. Violations are returned, never thrown.
ValidationReport validate_catalog(const Catalog& catalog);

/// Throws Error(EmptyCatalog) if there is no map at all.
ScaleExtrema scale_extrema(const Catalog& catalog);

/// Throws Error(InvalidCatalog) listing the violations if the catalog is not valid.
void require_valid(const Catalog& catalog);

/// Ready-made catalogs used by tests, examples and the CLI.
namespace catalogs {
/// Middle-thirds Cantor system with equal weights.
Catalog cantor();
/// Two maps of ratio 1/2 with equal weights; the invariant measure is Lebesgue.
Catalog lebesgue_halves();
/// Cantor system and a three-map system (r = 1/5, m = 1/3), each drawn with probability 1/2.
Catalog cantor_and_fifths();
}  // namespace catalogs

}  // namespace vcantor
