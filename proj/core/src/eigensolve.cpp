#include "vcantor/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vcantor/error.hpp"
#include "vcantor/parallel.hpp"

namespace vcantor {

namespace {

constexpr double kPivotFloor = 1e-300;
constexpr double kCancellation = 8.0 * std::numeric_limits<double>::epsilon();
constexpr double kLargePivot = 1e150;

}  // namespace

std::size_t inertia_count(const Pencil& pencil, double x) {
  if (std::isnan(x)) throw Error(ErrorKind::InvalidInput, "shift is NaN");
  // Pivots are carried as d_i = w_i + e_i with w_i = -K_{i,i+1} (w_{n-1} = 0), so that
  //   e_i = delta_i + (w_{i-1} e_{i-1} - x Mo (2 w_{i-1} + x Mo)) / d_{i-1} - x M_ii
  // with delta_i = K_ii - w_{i-1} - w_i. This is the LDL^T recurrence rearranged. For a
  // stiffness matrix assembled from elements delta_i is zero up to the rounding of the
  // row sum and is snapped to zero, so the constant Neumann mode gives an exactly zero
  // last pivot at x = 0 however stiff the neighbouring elements are.
  const std::size_t n = pencil.dimension();
  std::size_t count = 0;
  double pivot = 1.0;
  double e = 0.0;
  double w_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = i + 1 < n ? -pencil.k_off[i] : 0.0;
    double delta = pencil.k_diag[i] - w_prev - w;
    if (std::abs(delta) <= kCancellation * (std::abs(w_prev) + std::abs(w))) delta = 0.0;
    const double shift = x * pencil.m_diag[i];
    double q = 0.0;
    if (i > 0) {
      const double xmo = x * pencil.m_off[i - 1];
      if (std::abs(pivot) < kLargePivot) {
        q = (w_prev * e - xmo * (2.0 * w_prev + xmo)) / pivot;
      } else {
        const double s = w_prev + xmo;
        q = w_prev - s * (s / pivot);
      }
    }
    e = delta + q - shift;
    pivot = w + e;
    if (std::isnan(pivot)) throw Error(ErrorKind::InvalidInput, "pencil contains NaN");
    const double scale =
        std::max(kCancellation * (std::abs(w) + std::abs(delta) + std::abs(q) + std::abs(shift)), kPivotFloor);
    if (std::abs(pivot) <= scale) {
      pivot = -scale;
      e = pivot - w;
    }
    if (pivot < 0.0) ++count;
    w_prev = w;
  }
  return count;
}

std::vector<CountingSample> counting_function(const Pencil& pencil, std::span<const double> xs) {
  return counting_function(pencil, xs, 1);
}

std::vector<CountingSample> counting_function(const Pencil& pencil, std::span<const double> xs,
                                              std::size_t threads) {
  if (!std::is_sorted(xs.begin(), xs.end())) throw Error(ErrorKind::ArgumentError, "xs must be ascending");
  std::vector<CountingSample> out(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    out[i] = {xs[i], inertia_count(pencil, xs[i]), pencil.bc, pencil.level, pencil.splits};
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].count < out[i - 1].count) {
      throw Error(ErrorKind::InvalidInput, "counting function decreased at x=" + std::to_string(out[i].x));
    }
  }
  return out;
}

double spectral_upper_bound(const Pencil& pencil) {
  const std::size_t n = pencil.dimension();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double k_row = std::abs(pencil.k_diag[i]);
    double m_row = pencil.m_diag[i];
    if (i > 0) {
      k_row += std::abs(pencil.k_off[i - 1]);
      m_row -= std::abs(pencil.m_off[i - 1]);
    }
    if (i + 1 < n) {
      k_row += std::abs(pencil.k_off[i]);
      m_row -= std::abs(pencil.m_off[i]);
    }
    const double floor = 1e-3 * pencil.m_diag[i];
    bound = std::max(bound, k_row / std::max(m_row, floor));
  }
  return std::max(bound, 1.0) * (1.0 + 1e-12);
}

double eigenvalue(const Pencil& pencil, std::size_t i) {
  const std::size_t n = pencil.dimension();
  if (i == 0 || i > n) {
    throw Error(ErrorKind::IndexError, "eigenvalue index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  double lo = 0.0;
  double hi = spectral_upper_bound(pencil);
  while (inertia_count(pencil, hi) < i) hi *= 2.0;
  if (inertia_count(pencil, lo) >= i) return 0.0;
  // Invariant: count(lo) < i <= count(hi).
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * hi || mid <= lo || mid >= hi) break;
    if (inertia_count(pencil, mid) >= i) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace vcantor
