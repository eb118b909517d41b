#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semiquant/potentials.hpp"

namespace semiquant {

enum class ModeKind { Leading, FirstOrder, ClassExact, TwoParameter };

/// Correction applied to n + 1/2 in the quantization condition.
struct QuantizationMode {
  ModeKind kind = ModeKind::Leading;
  double t = 0.0;  // TwoParameter only

  static QuantizationMode leading() { return {ModeKind::Leading, 0.0}; }
  static QuantizationMode first_order() { return {ModeKind::FirstOrder, 0.0}; }
  static QuantizationMode class_exact() { return {ModeKind::ClassExact, 0.0}; }
  static QuantizationMode two_parameter(double t) { return {ModeKind::TwoParameter, t}; }

  bool operator==(const QuantizationMode&) const = default;
};

/// "leading", "first-order", "class-exact", "two-param".
std::string to_string(const QuantizationMode& mode);
/// Accepts the names above; `t` fills TwoParameter.
QuantizationMode parse_mode(std::string_view name, double t = 0.0);

enum class Delta1Source { None, Closed, Numeric };
std::string_view to_string(Delta1Source source);

struct LevelResult {
  int n = 0;
  double epsilon = 0.0;
  QuantizationMode mode;
  double delta_used = 0.0;
  double delta1 = 0.0;
  Delta1Source delta1_source = Delta1Source::None;
  double phi = 0.0;
  double residual = 0.0;  // |Phi(eps) - (n + 1/2 + delta)|
};

struct SpectrumOptions {
  int cap = 12;  // level cap for confining potentials
};

/// delta(eps) for the mode: 0, delta_1, the class map of delta_1, or the
/// two-parameter map. delta_1 is closed-form for class members and numeric
/// otherwise (stencil kept inside the well).
double mode_delta(const PotentialModel& model, const QuantizationMode& mode, double epsilon, double beta,
                  double* delta1_out = nullptr, Delta1Source* source_out = nullptr);

LevelResult solve_level(const PotentialModel& model, int n, const QuantizationMode& mode, double beta);

/// Levels 0..N-1 in ascending order; solved concurrently.
std::vector<LevelResult> solve_spectrum(const PotentialModel& model, const QuantizationMode& mode, double beta,
                                        const SpectrumOptions& options = {});

/// Number of n with Phi(edge) > n + 1/2 + delta(edge); the cap for
/// confining potentials.
int count_bound_states(const PotentialModel& model, const QuantizationMode& mode, double beta,
                       const SpectrumOptions& options = {});

struct ComparisonRow {
  int n = 0;
  QuantizationMode mode;
  double beta = 0.0;
  double epsilon = 0.0;
  double oracle = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

struct SlopeFit {
  QuantizationMode mode;
  int n = 0;
  double slope = 0.0;  // d log|error| / d log beta over the sweep
};

struct ComparisonTable {
  std::string oracle;  // "closed-form" or "grid"
  std::vector<ComparisonRow> rows;
  std::vector<SlopeFit> slopes;
};

struct CompareOptions {
  bool beta_sweep = false;  // also run beta/2 and beta/4
  int cap = 8;              // level cap for confining potentials
};

ComparisonTable compare_modes(const PotentialModel& model, double beta, const std::vector<QuantizationMode>& modes,
                              const CompareOptions& options = {});

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace semiquant
