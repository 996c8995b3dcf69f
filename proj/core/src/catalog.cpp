#include "vcantor/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vcantor/error.hpp"

namespace vcantor {

namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void add(ValidationReport& report, std::string code, std::optional<std::size_t> system,
         std::optional<std::size_t> map, std::string message) {
  report.violations.push_back({std::move(code), system, map, std::move(message)});
}

void check_system(const Catalog& catalog, std::size_t j, ValidationReport& report) {
  const auto& sys = catalog.systems[j];
  const double a = catalog.base.a;
  const double b = catalog.base.b;
  const double tol = 1e-12 * catalog.base.length();
  const std::size_t n = sys.size();

  if (n < 2) {
    add(report, "branching", j, std::nullopt,
        "N_j >= 2 required, system has " + std::to_string(n) + " map(s)");
  }
  if (sys.weights.size() != n) {
    add(report, "weights-length", j, std::nullopt,
        "weights has " + std::to_string(sys.weights.size()) + " entries for " + std::to_string(n) +
            " maps");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = sys.maps[i].ratio;
    if (!(r > 0.0 && r < 1.0)) {
      add(report, "ratio-range", j, i, "ratio r=" + fmt_real(r) + " outside (0,1)");
    }
    if (!std::isfinite(sys.maps[i].offset)) {
      add(report, "offset", j, i, "offset is not finite");
    }
  }
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < sys.weights.size(); ++i) {
    const double w = sys.weights[i];
    if (!(w > 0.0 && w < 1.0)) {
      add(report, "weight-range", j, i, "weight m=" + fmt_real(w) + " outside (0,1)");
    }
    weight_sum += w;
  }
  if (!sys.weights.empty() && std::abs(weight_sum - 1.0) > kUnitSumTolerance) {
    add(report, "weight-sum", j, std::nullopt, "weights sum to " + fmt_real(weight_sum) + ", expected 1");
  }
  if (n == 0) return;

  // a = S_1(a) < S_1(b) <= S_2(a) < ... <= S_N(a) < S_N(b) = b
  if (std::abs(sys.maps.front()(a) - a) > tol) {
    add(report, "left-end", j, 0, "S_1(a)=" + fmt_real(sys.maps.front()(a)) + " differs from a");
  }
  if (std::abs(sys.maps.back()(b) - b) > tol) {
    add(report, "right-end", j, n - 1,
        "S_N(b)=" + fmt_real(sys.maps.back()(b)) + " differs from b");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sys.maps[i];
    if (s(a) < a - tol || s(b) > b + tol) {
      add(report, "maps-outside", j, i,
          "S_" + std::to_string(i + 1) + " does not map [a,b] into itself");
    }
    if (i + 1 < n) {
      const double right = s(b);
      const double next_left = sys.maps[i + 1](a);
      if (right > next_left + tol) {
        add(report, "overlap", j, i,
            "cells overlap: S_" + std::to_string(i + 1) + "(b)=" + fmt_real(right) + " > S_" +
                std::to_string(i + 2) + "(a)=" + fmt_real(next_left));
      }
    }
  }
}

}  // namespace

std::size_t Catalog::max_branching() const noexcept {
  std::size_t n = 0;
  for (const auto& s : systems) n = std::max(n, s.size());
  return n;
}

ValidationReport validate_catalog(const Catalog& catalog) {
  ValidationReport report;
  if (!(catalog.base.a < catalog.base.b) || !std::isfinite(catalog.base.a) ||
      !std::isfinite(catalog.base.b)) {
    add(report, "interval", std::nullopt, std::nullopt, "base interval requires finite a < b");
    return report;
  }
  if (catalog.systems.empty()) {
    add(report, "empty", std::nullopt, std::nullopt, "catalog has no systems");
    return report;
  }
  for (std::size_t j = 0; j < catalog.systems.size(); ++j) check_system(catalog, j, report);

  if (catalog.probabilities.size() != catalog.systems.size()) {
    add(report, "probabilities-length", std::nullopt, std::nullopt,
        "probability vector has " + std::to_string(catalog.probabilities.size()) + " entries for " +
            std::to_string(catalog.systems.size()) + " systems");
  } else {
    double sum = 0.0;
    for (std::size_t j = 0; j < catalog.probabilities.size(); ++j) {
      const double p = catalog.probabilities[j];
      if (!(p >= 0.0) || !std::isfinite(p)) {
        add(report, "probability-range", j, std::nullopt, "probability p=" + fmt_real(p) + " is negative");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kUnitSumTolerance) {
      add(report, "probability-sum", std::nullopt, std::nullopt,
          "probabilities sum to " + fmt_real(sum) + ", expected 1");
    }
  }
  if (report.valid()) report.extrema = scale_extrema(catalog);
  return report;
}

ScaleExtrema scale_extrema(const Catalog& catalog) {
  ScaleExtrema e;
  bool any = false;
  bool any_weight = false;
  for (const auto& sys : catalog.systems) {
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const double r = sys.maps[i].ratio;
      if (!any) {
        e.r_inf = e.r_sup = r;
      } else {
        e.r_inf = std::min(e.r_inf, r);
        e.r_sup = std::max(e.r_sup, r);
      }
      any = true;
    }
    for (std::size_t i = 0; i < sys.weights.size(); ++i) {
      const double m = sys.weights[i];
      if (!any_weight) {
        e.m_inf = e.m_sup = m;
      } else {
        e.m_inf = std::min(e.m_inf, m);
        e.m_sup = std::max(e.m_sup, m);
      }
      any_weight = true;
    }
  }
  if (!any) throw Error(ErrorKind::EmptyCatalog, "catalog contains no contraction maps");
  e.eta = e.r_inf * e.m_inf;
  return e;
}

void require_valid(const Catalog& catalog) {
  const auto report = validate_catalog(catalog);
  if (report.valid()) return;
  std::string msg = "catalog failed validation:";
  for (const auto& v : report.violations) msg += "\n  [" + v.code + "] " + v.message;
  throw Error(ErrorKind::InvalidCatalog, msg);
}

namespace catalogs {

Catalog cantor() {
  Catalog c;
  c.systems.push_back({{{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}}, {0.5, 0.5}});
  c.probabilities = {1.0};
  return c;
}

Catalog lebesgue_halves() {
  Catalog c;
  c.systems.push_back({{{0.5, 0.0}, {0.5, 0.5}}, {0.5, 0.5}});
  c.probabilities = {1.0};
  return c;
}

Catalog cantor_and_fifths() {
  Catalog c = cantor();
  c.systems.push_back({{{0.2, 0.0}, {0.2, 0.4}, {0.2, 0.8}}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}});
  c.probabilities = {0.5, 0.5};
  return c;
}

}  // namespace catalogs

}  // namespace vcantor
