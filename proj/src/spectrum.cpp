#include "semiquant/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>

#include <boost/math/tools/toms748_solve.hpp>

#include "semiquant/corrections.hpp"
#include "semiquant/error.hpp"
#include "semiquant/oracle.hpp"
#include "semiquant/quadrature.hpp"

namespace semiquant {

namespace {

constexpr int kScanPoints = 64;

double tiny_offset(const PotentialModel& model, double beta) { return 1e-9 * model.energy_scale(beta); }

double numeric_delta1(const PotentialModel& model, double epsilon, double beta) {
  const double h = delta1_step(model, epsilon, beta);
  double e = std::max(epsilon, model.v_min() + 2.5 * h);
  if (std::isfinite(model.edge())) e = std::min(e, model.edge() - 2.5 * h);
  return delta1_numeric(model, e, beta, h).value;
}

struct Condition {
  const PotentialModel& model;
  const QuantizationMode& mode;
  double beta;
  int n;

  double operator()(double epsilon) const {
    const double phi = action_phase(model, epsilon, beta).phi;
    return phi - (n + 0.5 + mode_delta(model, mode, epsilon, beta));
  }
};

}  // namespace

std::string to_string(const QuantizationMode& mode) {
  switch (mode.kind) {
    case ModeKind::Leading: return "leading";
    case ModeKind::FirstOrder: return "first-order";
    case ModeKind::ClassExact: return "class-exact";
    case ModeKind::TwoParameter: return "two-param";
  }
  return "unknown";
}

QuantizationMode parse_mode(std::string_view name, double t) {
  if (name == "leading") return QuantizationMode::leading();
  if (name == "first-order") return QuantizationMode::first_order();
  if (name == "class-exact") return QuantizationMode::class_exact();
  if (name == "two-param") return QuantizationMode::two_parameter(t);
  fail(ErrorCode::BadInput, "unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Delta1Source source) {
  switch (source) {
    case Delta1Source::None: return "none";
    case Delta1Source::Closed: return "closed";
    case Delta1Source::Numeric: return "numeric";
  }
  return "unknown";
}

double mode_delta(const PotentialModel& model, const QuantizationMode& mode, double epsilon, double beta,
                  double* delta1_out, Delta1Source* source_out) {
  double d1 = 0.0;
  Delta1Source source = Delta1Source::None;
  if (mode.kind != ModeKind::Leading) {
    if (model.class_five()) {
      d1 = delta1_closed(*model.class_five(), beta);
      source = Delta1Source::Closed;
    } else {
      d1 = numeric_delta1(model, epsilon, beta);
      source = Delta1Source::Numeric;
    }
  }
  if (delta1_out) *delta1_out = d1;
  if (source_out) *source_out = source;
  switch (mode.kind) {
    case ModeKind::Leading: return 0.0;
    case ModeKind::FirstOrder: return d1;
    case ModeKind::ClassExact: return delta_class(d1);
    case ModeKind::TwoParameter: return delta_two_param(d1, mode.t);
  }
  return 0.0;
}

LevelResult solve_level(const PotentialModel& model, int n, const QuantizationMode& mode, double beta) {
  if (n < 0) fail(ErrorCode::BadParams, "level index must be non-negative");
  if (!(beta > 0.0)) fail(ErrorCode::BadParams, "beta must be positive");
  const Condition g{model, mode, beta, n};
  const double tiny = tiny_offset(model, beta);
  const double lo = model.v_min() + tiny;
  double hi;
  if (model.is_well()) {
    hi = model.edge() - tiny;
    if (!(g(hi) > 0.0)) {
      fail(ErrorCode::NoSuchLevel, "level " + std::to_string(n) + " is not bound (edge condition fails)");
    }
  } else {
    const double scale = model.energy_scale(beta);
    hi = model.v_min() + 2.0 * (n + 1) * scale;
    int grow = 0;
    while (!(g(hi) > 0.0)) {
      if (++grow > 60) fail(ErrorCode::NoSuchLevel, "no bracket for level " + std::to_string(n));
      hi = model.v_min() + 2.0 * (hi - model.v_min());
    }
  }

  std::vector<double> xs(kScanPoints), gs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = i == kScanPoints - 1 ? hi : lo + (hi - lo) * i / (kScanPoints - 1);
    gs[i] = g(xs[i]);
  }
  int changes = 0;
  int bracket = -1;
  for (int i = 0; i + 1 < kScanPoints; ++i) {
    if ((gs[i] <= 0.0) != (gs[i + 1] <= 0.0)) {
      ++changes;
      if (bracket < 0) bracket = i;
    }
  }
  if (changes > 1) {
    fail(ErrorCode::NonMonotoneCondition, "quantization condition for n = " + std::to_string(n) + " changes sign " +
                                              std::to_string(changes) + " times");
  }
  if (bracket < 0) fail(ErrorCode::NoSuchLevel, "level " + std::to_string(n) + " lies below the well minimum");

  std::uintmax_t iters = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(g, xs[bracket], xs[bracket + 1], gs[bracket], gs[bracket + 1],
                                                        boost::math::tools::eps_tolerance<double>(44), iters);
  LevelResult out;
  out.n = n;
  out.mode = mode;
  out.epsilon = 0.5 * (a + b);
  out.delta_used = mode_delta(model, mode, out.epsilon, beta, &out.delta1, &out.delta1_source);
  out.phi = action_phase(model, out.epsilon, beta).phi;
  out.residual = std::abs(out.phi - (n + 0.5 + out.delta_used));
  return out;
}

std::vector<LevelResult> solve_spectrum(const PotentialModel& model, const QuantizationMode& mode, double beta,
                                        const SpectrumOptions& options) {
  int candidates = options.cap;
  if (model.is_well()) {
    const double phi_edge = action_phase(model, model.edge() - tiny_offset(model, beta), beta).phi;
    candidates = static_cast<int>(std::floor(phi_edge + 0.5)) + 1;
  }
  std::vector<std::optional<LevelResult>> slots(static_cast<std::size_t>(candidates));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(candidates));
#pragma omp parallel for schedule(dynamic, 1)
  for (int n = 0; n < candidates; ++n) {
    try {
      slots[static_cast<std::size_t>(n)] = solve_level(model, n, mode, beta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSuchLevel) errors[static_cast<std::size_t>(n)] = std::current_exception();
    } catch (...) {
      errors[static_cast<std::size_t>(n)] = std::current_exception();
    }
  }
  std::vector<LevelResult> out;
  for (int n = 0; n < candidates; ++n) {
    if (errors[static_cast<std::size_t>(n)]) std::rethrow_exception(errors[static_cast<std::size_t>(n)]);
    if (!slots[static_cast<std::size_t>(n)]) break;
    out.push_back(*slots[static_cast<std::size_t>(n)]);
  }
  return out;
}

int count_bound_states(const PotentialModel& model, const QuantizationMode& mode, double beta,
                       const SpectrumOptions& options) {
  if (!model.is_well()) return options.cap;
  const double e = model.edge() - tiny_offset(model, beta);
  const double x = action_phase(model, e, beta).phi - 0.5 - mode_delta(model, mode, e, beta);
  return x > 0.0 ? static_cast<int>(std::ceil(x)) : 0;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ComparisonTable compare_modes(const PotentialModel& model, double beta, const std::vector<QuantizationMode>& modes,
                              const CompareOptions& options) {
  ComparisonTable table;
  table.oracle = model.has_exact_spectrum() ? "closed-form" : "grid";
  std::vector<double> betas{beta};
  if (options.beta_sweep) betas = {beta, 0.5 * beta, 0.25 * beta};

  for (double b : betas) {
    std::vector<double> reference;
    if (model.has_exact_spectrum()) {
      reference = closed_form_spectrum(model, b, model.is_well() ? 4096 : options.cap);
    } else {
      GridSolveConfig config;
      if (!model.is_well()) config.levels_wanted = options.cap;
      reference = grid_eigensolve(model, b, config).energies;
    }
    for (const QuantizationMode& mode : modes) {
      const auto levels = solve_spectrum(model, mode, b, {options.cap});
      for (const LevelResult& level : levels) {
        if (level.n >= static_cast<int>(reference.size())) break;
        ComparisonRow row;
        row.n = level.n;
        row.mode = mode;
        row.beta = b;
        row.epsilon = level.epsilon;
        row.oracle = reference[static_cast<std::size_t>(level.n)];
        row.abs_error = std::abs(level.epsilon - row.oracle);
        row.rel_error = row.abs_error / std::max(std::abs(row.oracle), 1e-300);
        table.rows.push_back(row);
      }
    }
  }

  if (betas.size() > 1) {
    for (const QuantizationMode& mode : modes) {
      for (int n = 0;; ++n) {
        std::vector<double> xs, ys;
        for (double b : betas) {
          for (const ComparisonRow& row : table.rows) {
            if (row.mode == mode && row.n == n && row.beta == b) {
              xs.push_back(b);
              ys.push_back(row.abs_error);
            }
          }
        }
        if (xs.size() != betas.size()) break;
        if (std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; })) {
          table.slopes.push_back({mode, n, log_log_slope(xs, ys)});
        }
      }
    }
  }
  return table;
}

}  // namespace semiquant
