#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>

#include "semiquant/error.hpp"
#include "semiquant/potentials.hpp"

namespace semiquant {

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int min_levels = 3;
  /// Evaluation budget: level l uses step 2^-l in the tanh-sinh variable.
  int max_levels = 10;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // |I_l - I_{l-1}| at the accepted level
  int levels = 0;
  int evaluations = 0;
};

/// Tanh-sinh (double exponential) quadrature of f over [a, b]. Nodes are
/// placed by their distance to the nearer endpoint, so integrable algebraic
/// endpoint singularities converge without special treatment, down to the
/// resolution of x near the ends (nodes within an ulp are dropped). Throws
/// QuadratureNonConvergence when the tolerance is not met within max_levels.
template <class F>
QuadratureResult tanh_sinh(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  if (!(b > a)) return out;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double t_max = 3.5;  // endpoint distance ~1e-22 of the half width
  const double half = 0.5 * (b - a);

  // Contribution of the node pair at +/- t (t > 0), or the centre if t == 0.
  auto pair_sum = [&](double t) {
    const double u = half_pi * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = half * half_pi * std::cosh(t) / (ch * ch);
    if (t == 0.0) {
      ++out.evaluations;
      return w * f(a + half);
    }
    const double d = half * 2.0 / (1.0 + std::exp(2.0 * u));
    double s = 0.0;
    if (d > 0.0 && w > 0.0) {
      const double xr = b - d;
      const double xl = a + d;
      if (xr < b) s += f(xr);
      if (xl > a) s += f(xl);
      out.evaluations += 2;
    }
    return w * s;
  };

  double h = 1.0;
  double sum = pair_sum(0.0);
  for (int k = 1; k <= static_cast<int>(t_max); ++k) sum += pair_sum(k);
  double estimate = h * sum;
  for (int level = 1; level <= opt.max_levels; ++level) {
    h *= 0.5;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = 1; k <= k_max; k += 2) sum += pair_sum(k * h);
    const double next = h * sum;
    out.error = std::abs(next - estimate);
    out.value = next;
    out.levels = level;
    estimate = next;
    if (level >= opt.min_levels && out.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(next))) {
      return out;
    }
  }
  char msg[128];
  std::snprintf(msg, sizeof msg, "tanh-sinh did not reach tolerance (last difference %.3g, value %.17g)", out.error,
                out.value);
  fail(ErrorCode::QuadratureNonConvergence, msg);
}

struct TurningPoints {
  double x_minus = 0.0;
  double x_plus = 0.0;
};

/// Solutions of V(x) = epsilon on either side of the minimum, refined to
/// full double precision by bracketed root solves.
TurningPoints turning_points(const PotentialModel& model, double epsilon);

/// Outermost point on one side of the minimum where V crosses `level`;
/// side = +1 for x > x_min, -1 for x < x_min.
double crossing_point(const PotentialModel& model, double level, int side);

struct PhasePoint {
  double epsilon = 0.0;
  double phi = 0.0;
  double x_minus = 0.0;
  double x_plus = 0.0;
  double quad_error = 0.0;
  int evaluations = 0;
};

/// Phi(eps) = (1 / (pi beta)) * integral of sqrt(eps - V) between the
/// turning points.
PhasePoint action_phase(const PotentialModel& model, double epsilon, double beta,
                        const QuadratureOptions& opt = {});

/// I(eps) = integral of V'^2 / sqrt(eps - V) between the turning points,
/// evaluated as 2 * integral of V'' sqrt(eps - V) (the boundary terms of the
/// integration by parts vanish because eps - V = 0 there).
QuadratureResult singular_moment(const PotentialModel& model, double epsilon,
                                 const QuadratureOptions& opt = {});

struct Delta1Estimate {
  double value = 0.0;
  double error = 0.0;
  double step = 0.0;
};

/// Default stencil step h = 1e-3 * max(|eps|, energy scale).
double delta1_step(const PotentialModel& model, double epsilon, double beta);

/// delta_1 = beta / (24 pi) * d^2 I / d eps^2 from a 5-point stencil with one
/// Richardson halving. `step` <= 0 selects delta1_step.
Delta1Estimate delta1_numeric(const PotentialModel& model, double epsilon, double beta, double step = 0.0);

/// gamma = d delta_1 / d eps by central difference with the delta1 step.
double gamma_numeric(const PotentialModel& model, double epsilon, double beta);

}  // namespace semiquant
