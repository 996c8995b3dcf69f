#include "vcantor/assembly.hpp"

#include <algorithm>

#include "vcantor/error.hpp"

namespace vcantor {

std::string_view to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

namespace {

struct Element {
  double h;
  double density;
};

}  // namespace

Pencil assemble(const CellDecomposition& decomposition, Boundary bc) {
  const auto& cells = decomposition.cells;
  if (cells.empty()) throw Error(ErrorKind::ArgumentError, "decomposition has no cells");

  std::vector<double> nodes{cells.front().left};
  std::vector<Element> elements;
  elements.reserve(cells.size() + decomposition.gaps.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const double start = nodes.back();
    const double tol = kTouchTolerance * c.length();
    if (c.left - start > tol) {
      elements.push_back({c.left - start, 0.0});
      nodes.push_back(c.left);
    }
    const double h = c.right - nodes.back();
    elements.push_back({h, c.mass / h});
    nodes.push_back(c.right);
  }

  const std::size_t n = nodes.size();
  std::vector<double> kd(n, 0.0), ko(n - 1, 0.0), md(n, 0.0), mo(n - 1, 0.0);
  std::vector<bool> touches_mass(n, false);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto [h, rho] = elements[e];
    const double stiff = 1.0 / h;
    kd[e] += stiff;
    kd[e + 1] += stiff;
    ko[e] -= stiff;
    if (rho > 0.0) {
      const double mass = rho * h;
      md[e] += mass / 3.0;
      md[e + 1] += mass / 3.0;
      mo[e] += mass / 6.0;
      touches_mass[e] = touches_mass[e + 1] = true;
    }
  }

  Pencil p;
  p.bc = bc;
  p.level = decomposition.level;
  p.splits = decomposition.splits;
  std::size_t first = 0;
  std::size_t last = n;  // exclusive
  if (bc == Boundary::Dirichlet) {
    first = 1;
    last = n - 1;
  }
  for (std::size_t i = first; i < last; ++i) {
    if (!touches_mass[i] || !(md[i] > 0.0)) {
      throw Error(ErrorKind::SingularMass, "mesh node " + std::to_string(i) + " at x=" + std::to_string(nodes[i]) +
                                               " touches no element with mass");
    }
  }
  if (last > first) {
    p.k_diag.assign(kd.begin() + static_cast<std::ptrdiff_t>(first), kd.begin() + static_cast<std::ptrdiff_t>(last));
    p.m_diag.assign(md.begin() + static_cast<std::ptrdiff_t>(first), md.begin() + static_cast<std::ptrdiff_t>(last));
    p.k_off.assign(ko.begin() + static_cast<std::ptrdiff_t>(first), ko.begin() + static_cast<std::ptrdiff_t>(last - 1));
    p.m_off.assign(mo.begin() + static_cast<std::ptrdiff_t>(first), mo.begin() + static_cast<std::ptrdiff_t>(last - 1));
  }
  p.nodes = std::move(nodes);
  return p;
}

}  // namespace vcantor
