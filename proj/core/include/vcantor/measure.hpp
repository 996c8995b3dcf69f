#pragma once

#include <cstddef>
#include <vector>

#include "vcantor/catalog.hpp"
#include "vcantor/vtree.hpp"

namespace vcantor {

/// One cell S_ii([a,b]) of the level-n approximation carrying mass m_ii at constant density.
struct Cell {
  double left = 0.0;
  double right = 1.0;
  double mass = 1.0;
  std::size_t node = 0;  // index of the generating node within its generation

  [[nodiscard]] double length() const noexcept { return right - left; }
  [[nodiscard]] double density() const noexcept { return mass / length(); }
  bool operator==(const Cell&) const = default;
};

struct Gap {
  double left = 0.0;
  double right = 0.0;

  [[nodiscard]] double length() const noexcept { return right - left; }
  bool operator==(const Gap&) const = default;
};

/// Piecewise-constant measure mu_n: the level-n cells in left-to-right order and the
/// positive-length gaps between them.
struct CellDecomposition {
  Interval base;
  std::size_t level = 0;
  std::size_t splits = 1;  // uniform sub-elements per cell, see refine_uniform
  std::vector<Cell> cells;
  std::vector<Gap> gaps;

  [[nodiscard]] double total_mass() const noexcept;
  bool operator==(const CellDecomposition&) const = default;
};

/// Cells closer than this fraction of the smaller adjacent cell length are treated as touching.
inline constexpr double kTouchTolerance = 1e-9;

CellDecomposition decompose(const VTree& tree, std::size_t level);

/// Stored mass of a cell; throws IndexError when out of range.
double cell_mass(const CellDecomposition& decomposition, std::size_t cell);

/// mu_n([u, v]) by exact integration of the density. Requires a <= u <= v <= b.
double measure_of_interval(const CellDecomposition& decomposition, double u, double v);

/// Splits every cell into `splits` equal sub-cells of the same density. Composes with
/// earlier refinements (splits multiply). Throws TreeTooLarge past `cell_cap` cells.
CellDecomposition refine_uniform(const CellDecomposition& decomposition, std::size_t splits,
                                 std::size_t cell_cap = 10'000'000);

/// Rebuilds the gap list from the cells (used after reading cells back from disk).
std::vector<Gap> gaps_between(const Interval& base, const std::vector<Cell>& cells);

}  // namespace vcantor
