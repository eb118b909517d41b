#include "semiquant/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semiquant/error.hpp"
#include "semiquant/quadrature.hpp"

namespace semiquant {

namespace {

constexpr double kAsymptoteTol = 1e-8;
constexpr double kDecayTarget = 11.5;  // tunnelling exponent to the box wall
constexpr int kMaxGrowth = 4;
constexpr double kTwoGridTol = 1e-5;

struct Side {
  int sign = 1;
  double asymptote = kInf;  // V limit on this side
  double limit = kInf;      // domain end on this side (signed coordinate)
};

Side side_info(const PotentialModel& model, int sign) {
  Side s;
  s.sign = sign;
  s.limit = sign > 0 ? model.x_hi() : model.x_lo();
  if (model.is_well()) s.asymptote = sign > 0 ? model.well().U : model.well().W;
  return s;
}

double box_end(const PotentialModel& model, const Side& side, double L) {
  const double x = model.x_min() + side.sign * L;
  return side.sign > 0 ? std::min(x, side.limit) : std::max(x, side.limit);
}

bool at_domain_limit(const Side& side, double end) { return std::isfinite(side.limit) && end == side.limit; }

bool asymptote_ok(const PotentialModel& model, const Side& side, double L, double scale) {
  const double end = box_end(model, side, L);
  if (at_domain_limit(side, end) || std::isinf(side.asymptote)) return true;
  return std::abs(model.value(end) - side.asymptote) < kAsymptoteTol * scale;
}

// Integral of sqrt(V - eps)/beta from the outer turning point to the box end.
double tunnelling_exponent(const PotentialModel& model, double beta, double eps, const Side& side, double end) {
  double start;
  try {
    start = crossing_point(model, eps, side.sign);
  } catch (const Error&) {
    return 0.0;
  }
  if ((end - start) * side.sign <= 0.0) return 0.0;
  constexpr int n = 512;
  const double h = (end - start) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double v = model.value(start + i * h) - eps;
    const double f = v > 0.0 ? std::sqrt(v) : 0.0;
    sum += (i == 0 || i == n) ? 0.5 * f : f;
  }
  return std::abs(h) * sum / beta;
}

struct PairSolve {
  std::vector<double> coarse;
  std::vector<double> fine;
  std::vector<double> extrapolated;
};

PairSolve solve_pair(const PotentialModel& model, double beta, double a, double b, int n, Boundary boundary,
                     int levels, double edge) {
  const kernels::Grid coarse_grid{a, b, n, boundary};
  const kernels::Grid fine_grid{a, b, boundary == Boundary::Dirichlet ? 2 * n + 1 : 2 * n, boundary};
  const kernels::Tridiagonal fine_t = kernels::assemble(model, beta, fine_grid);
  int m = levels;
  if (m <= 0) m = kernels::sturm_count(fine_t, edge) + 1;
  const kernels::Tridiagonal coarse_t = kernels::assemble(model, beta, coarse_grid);
  PairSolve out;
  out.coarse = kernels::lowest_eigenvalues(coarse_t, m);
  out.fine = kernels::lowest_eigenvalues(fine_t, m);
  out.extrapolated.resize(out.fine.size());
  for (std::size_t i = 0; i < out.fine.size(); ++i) out.extrapolated[i] = (4.0 * out.fine[i] - out.coarse[i]) / 3.0;
  return out;
}

// Levels kept from a pair solve: the requested count, or those below the edge.
std::size_t kept_levels(const PairSolve& p, int levels_wanted, double edge) {
  if (levels_wanted > 0) return std::min<std::size_t>(p.extrapolated.size(), static_cast<std::size_t>(levels_wanted));
  std::size_t k = 0;
  while (k < p.extrapolated.size() && p.extrapolated[k] < edge) ++k;
  return k;
}

double two_grid_difference(const PairSolve& p, std::size_t kept) {
  double d = 0.0;
  for (std::size_t i = 0; i < kept; ++i) d = std::max(d, std::abs(p.fine[i] - p.coarse[i]));
  return d;
}

}  // namespace

double asymptotic_half_width(const PotentialModel& model, double beta) {
  const double scale = model.energy_scale(beta);
  double L = 1.0;
  for (int sign : {-1, +1}) {
    const Side side = side_info(model, sign);
    double d = 1.0;
    if (std::isinf(side.asymptote)) {
      // Confining side: start where V clears the minimum by a few scales.
      while (!at_domain_limit(side, box_end(model, side, d)) &&
             model.value(box_end(model, side, d)) - model.v_min() < 16.0 * scale && d < 1e6) {
        d *= 1.25;
      }
    } else {
      while (!asymptote_ok(model, side, d, scale) && d < 1e6) d *= 1.25;
    }
    L = std::max(L, d);
  }
  return L;
}

GridSpectrum grid_eigensolve(const PotentialModel& model, double beta, const GridSolveConfig& config) {
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  if (config.points < 200) fail(ErrorCode::BadParams, "grid needs at least 200 points");
  if (!model.is_well() && config.levels_wanted <= 0) {
    fail(ErrorCode::BadParams, "confining potential: levels_wanted must be set");
  }
  const double scale = model.energy_scale(beta);
  const double edge = model.edge();
  const Side left = side_info(model, -1);
  const Side right = side_info(model, +1);

  double L = config.half_width > 0.0 ? config.half_width : asymptotic_half_width(model, beta);
  int n = config.points;
  int growth = 0;
  while (!(asymptote_ok(model, left, L, scale) && asymptote_ok(model, right, L, scale))) {
    if (!config.auto_grow || growth == kMaxGrowth) {
      fail(ErrorCode::DomainTooSmall, "|V(+-L) - asymptote| >= 1e-8 * scale at L = " + std::to_string(L));
    }
    L *= 2.0;
    n = 2 * n + 1;
    ++growth;
  }

  for (;;) {
    const double a = box_end(model, left, L);
    const double b = box_end(model, right, L);
    PairSolve pair;
    std::size_t kept = 0;
    double diff = 0.0;
    for (;;) {
      pair = solve_pair(model, beta, a, b, n, config.boundary, config.levels_wanted, edge);
      kept = kept_levels(pair, config.levels_wanted, edge);
      diff = two_grid_difference(pair, kept);
      if (diff <= kTwoGridTol || !config.auto_refine) break;
      if (2 * n + 1 > config.max_points) break;
      n = 2 * n + 1;
    }
    if (diff > kTwoGridTol) {
      fail(ErrorCode::NotConverged, "two-grid difference " + std::to_string(diff) + " exceeds 1e-5 at " +
                                        std::to_string(n) + " points");
    }

    bool decayed = true;
    if (config.auto_grow && config.boundary == Boundary::Dirichlet) {
      for (std::size_t i = 0; i < kept && decayed; ++i) {
        for (const Side* side : {&left, &right}) {
          const double end = side->sign > 0 ? b : a;
          if (at_domain_limit(*side, end)) continue;
          if (tunnelling_exponent(model, beta, pair.extrapolated[i], *side, end) < kDecayTarget) decayed = false;
        }
      }
    }
    if (decayed || growth == kMaxGrowth) {
      GridSpectrum out;
      out.energies.assign(pair.extrapolated.begin(), pair.extrapolated.begin() + static_cast<long>(kept));
      for (std::size_t i = 0; i < kept; ++i) out.errors.push_back(std::abs(pair.extrapolated[i] - pair.fine[i]));
      out.half_width = L;
      out.points = n;
      return out;
    }
    L *= 2.0;
    n = std::min(2 * n + 1, config.max_points);
    ++growth;
  }
}

std::vector<double> closed_form_spectrum(const PotentialModel& model, double beta, int max_levels) {
  if (!model.has_exact_spectrum()) fail(ErrorCode::NoClosedForm, "model '" + model.name() + "' has no closed-form spectrum");
  std::vector<double> out;
  for (int n = 0; n < max_levels; ++n) {
    const auto e = model.exact_level(n, beta);
    if (!e) break;
    out.push_back(*e);
  }
  return out;
}

int bound_state_count(const PotentialModel& model, double beta, const GridSolveConfig& config) {
  if (!model.is_well()) fail(ErrorCode::BadParams, "confining potential has infinitely many bound states");
  GridSolveConfig c = config;
  c.boundary = Boundary::Neumann;
  c.levels_wanted = 0;
  c.auto_grow = false;
  if (c.half_width <= 0.0) c.half_width = 2.0 * asymptotic_half_width(model, beta);
  return static_cast<int>(grid_eigensolve(model, beta, c).energies.size());
}

double grid_convergence_order(const PotentialModel& model, double beta, int index, const GridSolveConfig& config) {
  const double L = config.half_width > 0.0 ? config.half_width : asymptotic_half_width(model, beta);
  const Side left = side_info(model, -1);
  const Side right = side_info(model, +1);
  const double a = box_end(model, left, L);
  const double b = box_end(model, right, L);
  double e[3];
  int n = config.points;
  for (double& value : e) {
    const kernels::Grid grid{a, b, n, Boundary::Dirichlet};
    const auto levels = kernels::lowest_eigenvalues(kernels::assemble(model, beta, grid), index + 1);
    value = levels.at(static_cast<std::size_t>(index));
    n = 2 * n + 1;
  }
  return std::log2(std::abs(e[0] - e[1]) / std::abs(e[1] - e[2]));
}

}  // namespace semiquant

namespace semiquant {

ThresholdResult threshold_U_oracle(const SturmianFamily& family, int n, double beta,
                                   const OracleThresholdOptions& options) {
  if (n < 1) fail(ErrorCode::BadParams, "oracle thresholds need n >= 1");
  auto count = [&](double U) { return bound_state_count(family(U), beta); };
  double hi = beta * beta * family.scale() * family.scale();
  while (count(hi) < n + 1) {
    hi *= 2.0;
    if (hi > options.U_max) fail(ErrorCode::BracketNotFound, "no state " + std::to_string(n) + " below U_max");
  }
  double lo = 0.5 * hi;
  for (int halvings = 0; count(lo) > n; ++halvings) {
    if (halvings == 60) fail(ErrorCode::BracketNotFound, "state " + std::to_string(n) + " persists as U -> 0");
    lo *= 0.5;
  }
  while (hi - lo > options.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (count(mid) > n ? hi : lo) = mid;
  }
  ThresholdResult out;
  out.n = n;
  out.U = 0.5 * (lo + hi);
  out.method = ThresholdMethod::Oracle;
  out.residual = 0.5 * (hi - lo);
  out.k = family.k(out.U);
  return out;
}

}  // namespace semiquant
