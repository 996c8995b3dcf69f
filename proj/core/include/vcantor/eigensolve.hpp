#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vcantor/assembly.hpp"

namespace vcantor {

struct CountingSample {
  double x = 0.0;
  std::size_t count = 0;
  Boundary bc = Boundary::Dirichlet;
  std::size_t level = 0;
  std::size_t splits = 1;
};

/// Number of generalized eigenvalues of (K, M) that are <= x, from the signs of the
/// LDL^T pivots of K - x M (Sylvester's law of inertia).
///
/// A pivot whose magnitude is lost in cancellation (below a few ulps of the terms that
/// formed it, or below a tiny absolute floor) is replaced by a small negative number, so
/// an eigenvalue equal to x up to rounding is counted. Throws InvalidInput on NaN.
std::size_t inertia_count(const Pencil& pencil, double x);

/// inertia_count at every x of an ascending grid. Throws ArgumentError if xs is not sorted.
std::vector<CountingSample> counting_function(const Pencil& pencil, std::span<const double> xs);

/// Same as counting_function with the grid points evaluated by up to `threads` workers.
std::vector<CountingSample> counting_function(const Pencil& pencil, std::span<const double> xs,
                                              std::size_t threads);

/// Upper bound on the spectrum from row-wise Gershgorin ratios of K over M.
double spectral_upper_bound(const Pencil& pencil);

/// i-th smallest eigenvalue (1-based) by bisection on inertia_count, to relative 1e-10.
double eigenvalue(const Pencil& pencil, std::size_t i);

}  // namespace vcantor
