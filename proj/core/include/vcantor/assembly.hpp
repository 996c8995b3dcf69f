#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vcantor/measure.hpp"

namespace vcantor {

enum class Boundary { Dirichlet, Neumann };

std::string_view to_string(Boundary bc);

/// Symmetric tridiagonal pair (K, M) from piecewise-linear elements on the mesh of a
/// cell decomposition. Off-diagonal entry i couples unknowns i and i+1, so the
/// off-diagonal arrays have dimension-1 entries (empty for dimension <= 1).
struct Pencil {
  Boundary bc = Boundary::Dirichlet;
  std::vector<double> k_diag;
  std::vector<double> k_off;
  std::vector<double> m_diag;
  std::vector<double> m_off;
  std::vector<double> nodes;  // full mesh, boundary nodes included
  std::size_t level = 0;
  std::size_t splits = 1;

  [[nodiscard]] std::size_t dimension() const noexcept { return k_diag.size(); }
  bool operator==(const Pencil&) const = default;
};

/// Assembles K u = lambda M u. Cells become elements of constant density; gaps become
/// elements with stiffness only. Dirichlet drops the two boundary nodes.
/// Throws SingularMass if some unknown touches no element carrying mass.
Pencil assemble(const CellDecomposition& decomposition, Boundary bc);

}  // namespace vcantor
