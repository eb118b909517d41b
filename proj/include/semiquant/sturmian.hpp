#pragma once

#include <functional>
#include <optional>
#include <string>

#include "semiquant/potentials.hpp"

namespace semiquant {

/// k(r) = 1 - sqrt((r - 1) / (r + 1)).
double shape_factor_k(double r);

/// U -> well with V(+inf) = U. Either a fixed asymmetry r (W = r^2 U) or a
/// fixed left asymptote W, in which case r = sqrt(W / U) varies with U.
class SturmianFamily {
 public:
  using Generator = std::function<PotentialModel(double U)>;

  SturmianFamily(std::string name, Generator generator, double r, double scale, bool class_five);

  /// sturmian_family(U, r, scale); tanh^2 shape when r = 1.
  static SturmianFamily class_member(double r, double scale = 1.0);
  static SturmianFamily perturbed(double r, double scale, double eta);
  /// Class member with W held fixed.
  static SturmianFamily fixed_w(double W, double scale = 1.0);

  PotentialModel operator()(double U) const { return generator_(U); }
  const std::string& name() const { return name_; }
  double ratio(double U) const;
  double k(double U) const { return shape_factor_k(ratio(U)); }
  double scale() const { return scale_; }
  bool is_class_five() const { return class_five_; }
  bool has_fixed_ratio() const { return !fixed_w_; }
  std::optional<double> fixed_w_value() const { return fixed_w_; }

 private:
  std::string name_;
  Generator generator_;
  double r_ = 1.0;
  double scale_ = 1.0;
  bool class_five_ = false;
  std::optional<double> fixed_w_;
};

/// Phi(U) at the edge energy eps = U of generator(U).
double phase_at_edge(const SturmianFamily& family, double U, double beta);

/// Edge phase by quadrature: finite turning point on the steep side, a cut
/// where U - V = 1e-10 U on the side approaching U, and an exponential tail
/// closure beyond the cut.
double edge_phase_numeric(const PotentialModel& model, double beta);

/// Larger root of 8 Phi^2 - 8 (n + 1/2) Phi + k = 0.
double threshold_condition(int n, double k, double beta);

enum class ThresholdMethod { Condition21, RefinedDelta, Oracle };
std::string to_string(ThresholdMethod method);

struct ThresholdResult {
  int n = 0;
  double U = 0.0;
  ThresholdMethod method = ThresholdMethod::Condition21;
  double residual = 0.0;
  double k = 1.0;
  double t = 0.0;  // deviation parameter at the threshold (RefinedDelta)
};

ThresholdResult threshold_U(const SturmianFamily& family, int n, double beta, ThresholdMethod method);

/// Two-parameter delta at the edge: delta_two_param(d1, sturmian_t(phi, d1, k)).
double refined_delta_U(double phi_edge, double delta1_edge, double k);

}  // namespace semiquant
