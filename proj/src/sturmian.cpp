#include "semiquant/sturmian.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "semiquant/corrections.hpp"
#include "semiquant/error.hpp"
#include "semiquant/quadrature.hpp"

namespace semiquant {

namespace {

constexpr double kCut = 1e-10;

// Solves f(U) = 0 for an f increasing in U, starting from a guess.
template <class F>
double solve_increasing(F&& f, double guess, const char* what) {
  double lo = 0.5 * guess, hi = 2.0 * guess;
  double f_lo = f(lo), f_hi = f(hi);
  for (int i = 0; f_lo > 0.0; ++i) {
    if (i == 60) fail(ErrorCode::NonConvergence, std::string(what) + ": no lower bracket");
    hi = lo;
    f_hi = f_lo;
    lo *= 0.5;
    f_lo = f(lo);
  }
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i == 60) fail(ErrorCode::NonConvergence, std::string(what) + ": no upper bracket");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = f(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                                        boost::math::tools::eps_tolerance<double>(50), iters);
  if (iters >= 200) fail(ErrorCode::NonConvergence, std::string(what) + ": root solve did not converge");
  return 0.5 * (a + b);
}

// Integral of sqrt(U - V) beyond the cut on a side where V -> U, assuming
// U - V ~ c exp(-kappa |x|).
double exponential_tail(const PotentialModel& model, double U, int side, double x_cut) {
  const double x8 = crossing_point(model, U * (1.0 - 1e-8), side);
  const double x9 = crossing_point(model, U * (1.0 - 1e-9), side);
  const double kappa_a = std::log(10.0) / std::abs(x9 - x8);
  const double kappa_b = std::log(10.0) / std::abs(x_cut - x9);
  if (!(std::abs(kappa_b / kappa_a - 1.0) <= 0.1)) {
    fail(ErrorCode::TailNonConvergent, "approach to the edge is not exponential (decay rates " +
                                           std::to_string(kappa_a) + ", " + std::to_string(kappa_b) + ")");
  }
  return 2.0 * std::sqrt(std::max(0.0, U - model.value(x_cut))) / kappa_b;
}

}  // namespace

double shape_factor_k(double r) {
  if (!(r >= 1.0)) fail(ErrorCode::BadRatio, "r must be >= 1, got " + std::to_string(r));
  if (std::isinf(r)) return 0.0;
  return 1.0 - std::sqrt((r - 1.0) / (r + 1.0));
}

SturmianFamily::SturmianFamily(std::string name, Generator generator, double r, double scale, bool class_five)
    : name_(std::move(name)), generator_(std::move(generator)), r_(r), scale_(scale), class_five_(class_five) {
  shape_factor_k(r);
  if (!(scale > 0.0)) fail(ErrorCode::BadParams, "scale must be positive");
}

SturmianFamily SturmianFamily::class_member(double r, double scale) {
  return SturmianFamily(r == 1.0 ? "tanh2" : "sturmian_family",
                        [r, scale](double U) { return sturmian_family(U, r, scale); }, r, scale, true);
}

SturmianFamily SturmianFamily::perturbed(double r, double scale, double eta) {
  return SturmianFamily("perturbed_sturmian",
                        [r, scale, eta](double U) { return perturbed_sturmian(U, r, scale, eta); }, r, scale, false);
}

SturmianFamily SturmianFamily::fixed_w(double W, double scale) {
  if (!(W > 0.0)) fail(ErrorCode::BadParams, "W must be positive");
  SturmianFamily f("sturmian_family_fixed_W",
                   [W, scale](double U) {
                     if (!(U > 0.0 && U <= W)) fail(ErrorCode::BadRatio, "fixed-W sweep needs 0 < U <= W");
                     return sturmian_family(U, std::sqrt(W / U), scale);
                   },
                   1.0, scale, true);
  f.fixed_w_ = W;
  return f;
}

double SturmianFamily::ratio(double U) const {
  if (!fixed_w_) return r_;
  if (!(U > 0.0 && U <= *fixed_w_)) fail(ErrorCode::BadRatio, "fixed-W sweep needs 0 < U <= W");
  return std::sqrt(*fixed_w_ / U);
}

double edge_phase_numeric(const PotentialModel& model, double beta) {
  if (!model.is_well()) fail(ErrorCode::BadParams, "edge phase needs a well");
  const double U = model.edge();
  const double tol = 1e-12 * std::abs(U);
  double ends[2];
  double tails = 0.0;
  for (int side : {-1, +1}) {
    const double asymptote = side > 0 ? model.well().U : model.well().W;
    double& end = ends[side > 0 ? 1 : 0];
    if (std::abs(asymptote - U) <= tol) {
      end = crossing_point(model, U * (1.0 - kCut), side);
      tails += exponential_tail(model, U, side, end);
    } else {
      end = crossing_point(model, U, side);
    }
  }
  auto integrand = [&](double x) { return std::sqrt(std::max(0.0, U - model.value(x))); };
  QuadratureOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-12;
  opt.max_levels = 12;
  const QuadratureResult q = tanh_sinh(integrand, ends[0], ends[1], opt);
  return (q.value + tails) / (std::numbers::pi * beta);
}

double phase_at_edge(const SturmianFamily& family, double U, double beta) {
  if (!(U > 0.0)) fail(ErrorCode::BadParams, "U must be positive");
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  if (family.is_class_five()) return std::sqrt(U) * family.k(U) / (beta * family.scale());
  return edge_phase_numeric(family(U), beta);
}

double threshold_condition(int n, double k, double beta) {
  if (n < 0) fail(ErrorCode::BadParams, "n must be non-negative");
  if (!(k > 0.0 && k <= 1.0)) fail(ErrorCode::BadParams, "k must lie in (0, 1]");
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  const double m = n + 0.5;
  const double disc = m * m - 0.5 * k;
  if (disc < 0.0) {
    fail(ErrorCode::NoRealRoot, "no positive threshold for n = " + std::to_string(n) + ", k = " + std::to_string(k));
  }
  return 0.5 * (m + std::sqrt(disc));
}

std::string to_string(ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::Condition21: return "condition21";
    case ThresholdMethod::RefinedDelta: return "refined-delta";
    case ThresholdMethod::Oracle: return "oracle";
  }
  return "unknown";
}

double refined_delta_U(double phi_edge, double delta1_edge, double k) {
  return delta_two_param(delta1_edge, sturmian_t(phi_edge, delta1_edge, k));
}

ThresholdResult threshold_U(const SturmianFamily& family, int n, double beta, ThresholdMethod method) {
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  ThresholdResult out;
  out.n = n;
  out.method = method;

  // Condition (21); also the starting bracket for the refined solve.
  double U21;
  if (family.has_fixed_ratio()) {
    const double k = family.k(1.0);
    const double phi_star = threshold_condition(n, k, beta);
    U21 = std::pow(beta * family.scale() * phi_star / k, 2);
    if (!family.is_class_five()) {
      U21 = solve_increasing(
          [&](double U) { return phase_at_edge(family, U, beta) - phi_star; }, U21, "condition (21)");
    }
  } else {
    const double W = *family.fixed_w_value();
    auto f = [&](double U) {
      return phase_at_edge(family, U, beta) - threshold_condition(n, family.k(U), beta);
    };
    // Condition (21) has a real root only while k(U) <= 2 (n + 1/2)^2.
    const double q = 1.0 - 2.0 * (n + 0.5) * (n + 0.5);
    const double r_min = q > 0.0 ? (1.0 + q * q) / (1.0 - q * q) : 1.0;
    const double hi = W / (r_min * r_min);
    const double lo = hi * 1e-6;
    const double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) fail(ErrorCode::NoRealRoot, "no threshold inside (0, W]");
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
    U21 = 0.5 * (a + b);
  }

  if (method == ThresholdMethod::Condition21) {
    out.U = U21;
    out.k = family.k(U21);
    out.residual = std::abs(phase_at_edge(family, U21, beta) - threshold_condition(n, out.k, beta));
    return out;
  }
  if (method != ThresholdMethod::RefinedDelta) fail(ErrorCode::BadParams, "use threshold_U_oracle for oracle thresholds");

  auto delta_at = [&](double U, double phi, double* t_out) {
    const double k = family.k(U);
    double d1;
    if (family.is_class_five()) {
      d1 = delta1_closed(*family(U).class_five(), beta);
    } else {
      d1 = -k / (8.0 * phi);  // t = 0 closure
    }
    if (t_out) *t_out = sturmian_t(phi, d1, k);
    return refined_delta_U(phi, d1, k);
  };
  auto F = [&](double U) {
    const double phi = phase_at_edge(family, U, beta);
    return phi - (n + 0.5 + delta_at(U, phi, nullptr));
  };
  const double U = family.has_fixed_ratio()
                       ? solve_increasing(F, U21, "refined threshold")
                       : solve_increasing(F, U21, "refined threshold (fixed W)");
  out.U = U;
  out.k = family.k(U);
  const double phi = phase_at_edge(family, U, beta);
  out.residual = std::abs(phi - (n + 0.5 + delta_at(U, phi, &out.t)));
  return out;
}

}  // namespace semiquant
