#include "semiquant/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

namespace semiquant {

namespace {

constexpr int kProbes = 256;

// Distance of probe j from the minimum on a side of extent `extent`.
double probe_distance(int j, double extent) {
  if (std::isinf(extent)) return 1e-8 * std::pow(10.0, 16.0 * j / (kProbes - 1));
  constexpr int kLog = 192;
  if (j < kLog) return extent * 1e-10 * std::pow(0.5e10, static_cast<double>(j) / (kLog - 1));
  return extent * (1.0 - 0.5 * std::pow(10.0, -0.25 * (j - kLog + 1)));
}

// Kinks in a C1 interpolant slow tanh-sinh to algebraic convergence.
QuadratureOptions adapted(const PotentialModel& model, QuadratureOptions opt) {
  if (model.piecewise()) {
    opt.max_levels = std::max(opt.max_levels, 16);
    opt.abs_tol = std::max(opt.abs_tol, 1e-11);
    opt.rel_tol = std::max(opt.rel_tol, 1e-11);
  }
  return opt;
}

}  // namespace

double crossing_point(const PotentialModel& model, double level, int side) {
  const double x0 = model.x_min();
  const double extent = side > 0 ? model.x_hi() - x0 : x0 - model.x_lo();
  auto excess = [&](double x) { return model.value(x) - level; };

  double inner = x0;
  double f_inner = excess(x0);
  for (int j = 0; j < kProbes; ++j) {
    const double x = x0 + side * probe_distance(j, extent);
    const double f = excess(x);
    if (f > 0.0) {
      double lo = std::min(inner, x);
      double hi = std::max(inner, x);
      double f_lo = side > 0 ? f_inner : f;
      double f_hi = side > 0 ? f : f_inner;
      if (std::isinf(f_hi) || std::isinf(f_lo)) {
        // Wall sample; pull the bracket end inside the domain.
        while (std::isinf(side > 0 ? f_hi : f_lo)) {
          const double mid = 0.5 * (lo + hi);
          const double fm = excess(mid);
          if (fm > 0.0) {
            (side > 0 ? hi : lo) = mid;
            (side > 0 ? f_hi : f_lo) = fm;
          } else {
            (side > 0 ? lo : hi) = mid;
            (side > 0 ? f_lo : f_hi) = fm;
          }
        }
      }
      std::uintmax_t iters = 200;
      auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, f_lo, f_hi,
                                                      boost::math::tools::eps_tolerance<double>(52), iters);
      // Keep the endpoint on the allowed side of the crossing.
      return side > 0 ? a : b;
    }
    inner = x;
    f_inner = f;
  }
  fail(ErrorCode::NoTurningPoint, "V never rises above " + std::to_string(level) + " on the " +
                                      (side > 0 ? std::string("right") : std::string("left")));
}

TurningPoints turning_points(const PotentialModel& model, double epsilon) {
  if (!(epsilon > model.v_min())) {
    fail(ErrorCode::NoTurningPoint, "energy " + std::to_string(epsilon) + " is not above the well minimum");
  }
  if (model.is_well()) {
    const Well& w = model.well();
    const double tol = 1e-14 * std::max(1.0, std::abs(model.edge()));
    if (epsilon >= w.U - tol || epsilon >= w.W - tol) {
      fail(ErrorCode::EdgeEnergy, "energy " + std::to_string(epsilon) + " reaches the well edge " +
                                      std::to_string(model.edge()));
    }
  }
  return {crossing_point(model, epsilon, -1), crossing_point(model, epsilon, +1)};
}

PhasePoint action_phase(const PotentialModel& model, double epsilon, double beta, const QuadratureOptions& opt) {
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  const TurningPoints tp = turning_points(model, epsilon);
  auto integrand = [&](double x) { return std::sqrt(std::max(0.0, epsilon - model.value(x))); };
  const QuadratureResult q = tanh_sinh(integrand, tp.x_minus, tp.x_plus, adapted(model, opt));
  const double scale = 1.0 / (std::numbers::pi * beta);
  return {epsilon, q.value * scale, tp.x_minus, tp.x_plus, q.error * scale, q.evaluations};
}

QuadratureResult singular_moment(const PotentialModel& model, double epsilon, const QuadratureOptions& opt) {
  const TurningPoints tp = turning_points(model, epsilon);
  if (model.piecewise()) {
    // V'' jumps at the knots; the unintegrated form only needs V'.
    auto integrand = [&](double x) {
      const double gap = epsilon - model.value(x);
      const double d = model.derivative(x);
      return gap > 0.0 ? d * d / std::sqrt(gap) : 0.0;
    };
    // Nodes within an ulp of the ends are lost, about 1e-8 of the moment.
    QuadratureOptions o = adapted(model, opt);
    o.rel_tol = std::max(o.rel_tol, 1e-8);
    return tanh_sinh(integrand, tp.x_minus, tp.x_plus, o);
  }
  auto integrand = [&](double x) {
    return 2.0 * model.second_derivative(x) * std::sqrt(std::max(0.0, epsilon - model.value(x)));
  };
  return tanh_sinh(integrand, tp.x_minus, tp.x_plus, adapted(model, opt));
}

double delta1_step(const PotentialModel& model, double epsilon, double beta) {
  return 1e-3 * std::max(std::abs(epsilon), model.energy_scale(beta));
}

Delta1Estimate delta1_numeric(const PotentialModel& model, double epsilon, double beta, double step) {
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  const double h = step > 0.0 ? step : delta1_step(model, epsilon, beta);
  if (!(epsilon - 2.0 * h > model.v_min()) || !(epsilon + 2.0 * h < model.edge())) {
    fail(ErrorCode::StencilOutOfRange, "stencil eps +/- 2h leaves (v_min, edge) at eps = " + std::to_string(epsilon));
  }
  // Nodes eps + k h / 2 for k = -4..4; the 5-point rules use every node
  // (step h/2) and every other node (step h).
  std::array<double, 9> moment{};
  double quad_err = 0.0;
  for (int k = -4; k <= 4; ++k) {
    if (k == -3 || k == 3) continue;
    const QuadratureResult q = singular_moment(model, epsilon + 0.5 * k * h);
    moment[k + 4] = q.value;
    quad_err = std::max(quad_err, q.error);
  }
  auto second = [&](int stride, double hh) {
    const double fm2 = moment[4 - 2 * stride], fm1 = moment[4 - stride], f0 = moment[4];
    const double fp1 = moment[4 + stride], fp2 = moment[4 + 2 * stride];
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * hh * hh);
  };
  const double coarse = second(2, h);
  const double fine = second(1, 0.5 * h);
  const double extrapolated = (16.0 * fine - coarse) / 15.0;
  const double factor = beta / (24.0 * std::numbers::pi);
  const double noise = quad_err * 64.0 / (12.0 * 0.25 * h * h);
  return {factor * extrapolated, factor * std::max(std::abs(extrapolated - fine), noise), h};
}

double gamma_numeric(const PotentialModel& model, double epsilon, double beta) {
  const double h = delta1_step(model, epsilon, beta);
  if (!(epsilon - 3.0 * h > model.v_min()) || !(epsilon + 3.0 * h < model.edge())) {
    fail(ErrorCode::StencilOutOfRange, "gamma stencil eps +/- 3h leaves (v_min, edge)");
  }
  const double up = delta1_numeric(model, epsilon + h, beta, h).value;
  const double down = delta1_numeric(model, epsilon - h, beta, h).value;
  return (up - down) / (2.0 * h);
}

}  // namespace semiquant
