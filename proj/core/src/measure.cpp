#include "vcantor/measure.hpp"

#include <algorithm>
#include <string>

#include "neumaier.hpp"
#include "vcantor/error.hpp"

namespace vcantor {

double CellDecomposition::total_mass() const noexcept {
  detail::Neumaier sum;
  for (const auto& c : cells) sum.add(c.mass);
  return sum.value();
}

std::vector<Gap> gaps_between(const Interval& base, const std::vector<Cell>& cells) {
  std::vector<Gap> gaps;
  (void)base;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const auto& l = cells[i];
    const auto& r = cells[i + 1];
    const double tol = kTouchTolerance * std::min(l.length(), r.length());
    if (r.left - l.right > tol) gaps.push_back({l.right, r.left});
  }
  return gaps;
}

CellDecomposition decompose(const VTree& tree, std::size_t level) {
  if (level > tree.depth()) {
    throw DepthExhausted("decomposition level " + std::to_string(level) + " exceeds tree depth " +
                             std::to_string(tree.depth()),
                         level - tree.depth());
  }
  CellDecomposition dec;
  dec.base = tree.catalog().base;
  dec.level = level;
  const auto gen = tree.generation(level);
  dec.cells.reserve(gen.size());
  for (std::size_t i = 0; i < gen.size(); ++i) dec.cells.push_back({gen[i].left, gen[i].right, gen[i].m, i});
  dec.gaps = gaps_between(dec.base, dec.cells);
  return dec;
}

double cell_mass(const CellDecomposition& decomposition, std::size_t cell) {
  if (cell >= decomposition.cells.size()) {
    throw Error(ErrorKind::IndexError, "cell " + std::to_string(cell) + " out of range (" +
                                           std::to_string(decomposition.cells.size()) + " cells)");
  }
  return decomposition.cells[cell].mass;
}

double measure_of_interval(const CellDecomposition& decomposition, double u, double v) {
  const auto& base = decomposition.base;
  if (!(u <= v)) throw Error(ErrorKind::ArgumentError, "inverted interval");
  // cell ends come from products of ratios and may sit a rounding error outside
  const double slack = 1e-12 * (base.b - base.a);
  if (u < base.a - slack || v > base.b + slack) {
    throw Error(ErrorKind::ArgumentError, "interval leaves the base interval");
  }
  const auto& cells = decomposition.cells;
  // First cell whose right end lies beyond u.
  auto it = std::upper_bound(cells.begin(), cells.end(), u,
                             [](double value, const Cell& c) { return value < c.right; });
  detail::Neumaier total;
  for (; it != cells.end() && it->left < v; ++it) {
    if (u <= it->left && it->right <= v) {
      total.add(it->mass);
    } else {
      const double lo = std::max(u, it->left);
      const double hi = std::min(v, it->right);
      if (hi > lo) total.add(it->density() * (hi - lo));
    }
  }
  return total.value();
}

CellDecomposition refine_uniform(const CellDecomposition& decomposition, std::size_t splits, std::size_t cell_cap) {
  if (splits == 0) throw Error(ErrorKind::ArgumentError, "splits must be at least 1");
  if (splits == 1) return decomposition;
  const std::size_t count = decomposition.cells.size() * splits;
  if (count > cell_cap) {
    throw Error(ErrorKind::TreeTooLarge, "refinement would create " + std::to_string(count) + " cells (cap " +
                                             std::to_string(cell_cap) + ")");
  }
  CellDecomposition out;
  out.base = decomposition.base;
  out.level = decomposition.level;
  out.splits = decomposition.splits * splits;
  out.gaps = decomposition.gaps;
  out.cells.reserve(count);
  const double s = static_cast<double>(splits);
  for (const auto& c : decomposition.cells) {
    const double h = c.length() / s;
    const double mass = c.mass / s;
    for (std::size_t q = 0; q < splits; ++q) {
      const double left = q == 0 ? c.left : c.left + h * static_cast<double>(q);
      const double right = q + 1 == splits ? c.right : c.left + h * static_cast<double>(q + 1);
      out.cells.push_back({left, right, mass, c.node});
    }
  }
  return out;
}

}  // namespace vcantor
