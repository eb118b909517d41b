#include "semiquant/corrections.hpp"

#include <cmath>
#include <string>

#include "semiquant/error.hpp"

namespace semiquant {

double delta1_closed(const ClassFiveSpec& spec, double beta) {
  if (!(spec.A > 0.0)) fail(ErrorCode::BadParams, "A must be positive");
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  return beta * spec.a2 / (8.0 * spec.A);
}

double delta_class(double delta1) {
  const double d = delta1;
  if (std::abs(d) <= 1.0) return 2.0 * d / (1.0 + std::sqrt(1.0 + (4.0 * d) * (4.0 * d)));
  // Divide through by 4|d| so nothing squares a large number.
  const double inv = 1.0 / (4.0 * std::abs(d));
  return std::copysign(0.5 / (inv + std::sqrt(inv * inv + 1.0)), d);
}

double delta_series(double delta1, int order) {
  if (order == 1) return delta1;
  if (order != 3) fail(ErrorCode::BadParams, "series order must be 1 or 3");
  if (16.0 * delta1 * delta1 >= 1.0) {
    fail(ErrorCode::SeriesDiverges, "16 delta1^2 = " + std::to_string(16.0 * delta1 * delta1) + " >= 1");
  }
  return delta1 - 4.0 * delta1 * delta1 * delta1;
}

double delta_two_param(double delta1, double t) {
  const double d = delta1;
  // Same scaling as delta_class, so t = 0 reproduces it bit for bit.
  const double c = std::abs(d) <= 1.0 ? 1.0 : 4.0 * std::abs(d);
  const double p = (1.0 + t) / c;
  const double q = (1.0 - t) / c;
  const double e = 4.0 * d / c;
  const double root = std::hypot(q, e);
  double denom;
  if (p >= 0.0) {
    denom = p + root;
  } else {
    // root + p cancels; use (root + p)(root - p) = e^2 - 4 t / c^2.
    denom = (e * e - 4.0 * t / (c * c)) / (root - p);
  }
  if (!(std::abs(denom) * c > 1e-14)) {
    fail(ErrorCode::DegenerateDenominator, "1 + t + sqrt((1-t)^2 + 16 delta1^2) vanishes at t = " + std::to_string(t));
  }
  return (2.0 * d / c) / denom;
}

double sturmian_t(double phi_edge, double delta1, double k) {
  if (!(phi_edge >= 0.0)) fail(ErrorCode::BadParams, "edge phase must be non-negative");
  if (!(k > 0.0 && k <= 1.0)) fail(ErrorCode::BadParams, "k must lie in (0, 1]");
  return 8.0 * phi_edge * std::abs(delta1) / k - 1.0;
}

double small_parameter_b(int count) {
  if (count < 1) fail(ErrorCode::BadCount, "bound-state count must be at least 1, got " + std::to_string(count));
  return 1.0 / (8.0 * (count - 0.5));
}

}  // namespace semiquant
