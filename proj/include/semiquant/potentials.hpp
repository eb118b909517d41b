#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace semiquant {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// V grows without bound at both ends of the domain.
struct Confining {};

/// Finite asymptote on at least one side. Orientation is fixed on
/// construction: V(+inf) -> U and V(-inf) -> W with W >= U (W may be +inf).
struct Well {
  double U = 0.0;
  double W = 0.0;
};

using Asymptotics = std::variant<Confining, Well>;

/// Closed-form solution family of ds/dx = a2 s^2 + a1 s + a0.
enum class Branch { Linear, Exponential, Tanh, Coth, Rational, Tan };

std::string_view to_string(Branch branch);

/// V = A^2 s^2 + B s + C with ds/dx = a2 s^2 + a1 s + a0.
///
/// After build_class_five the stored coefficients are normalized so that
/// s(x) is increasing (sigma > 0 on the branch) and the orientation matches
/// the owning PotentialModel; `branch` is then the branch actually used.
struct ClassFiveSpec {
  double A = 1.0;
  double B = 0.0;
  double C = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 1.0;
  double s0 = 0.0;
  Branch branch = Branch::Linear;

  double sigma(double s) const { return (a2 * s + a1) * s + a0; }
  double potential(double s) const { return (A * A * s + B) * s + C; }
  double discriminant() const { return a1 * a1 - 4.0 * a2 * a0; }
  double s_at_minimum() const { return -B / (2.0 * A * A); }
};

/// Closed-form bound level n at quantum parameter beta; nullopt past the
/// last bound state.
using LevelFunction = std::function<std::optional<double>(int n, double beta)>;
using RealFunction = std::function<double(double)>;

/// Immutable single-well potential. Copies share the underlying data.
class PotentialModel {
 public:
  struct Parts {
    std::string name;
    RealFunction value;
    RealFunction derivative;
    RealFunction second_derivative;  // optional; central difference of derivative otherwise
    Asymptotics asymptotics;
    double x_lo = -kInf;
    double x_hi = kInf;
    double x_min = 0.0;
    double v_min = 0.0;
    std::optional<ClassFiveSpec> class_five;
    RealFunction auxiliary;  // s(x), class-five members only
    LevelFunction exact_levels;
    bool mirrored = false;
    bool piecewise = false;  // only C1 (interpolated tables)
  };

  explicit PotentialModel(Parts parts);

  double value(double x) const;
  double operator()(double x) const { return value(x); }
  double derivative(double x) const;
  double second_derivative(double x) const;

  const Asymptotics& asymptotics() const { return parts_->asymptotics; }
  bool is_well() const { return std::holds_alternative<Well>(parts_->asymptotics); }
  const Well& well() const;
  /// min(U, W) for wells, +inf for confining potentials.
  double edge() const;
  double x_lo() const { return parts_->x_lo; }
  double x_hi() const { return parts_->x_hi; }
  double x_min() const { return parts_->x_min; }
  double v_min() const { return parts_->v_min; }

  const std::optional<ClassFiveSpec>& class_five() const { return parts_->class_five; }
  bool has_auxiliary() const { return static_cast<bool>(parts_->auxiliary); }
  double auxiliary(double x) const;

  bool has_exact_spectrum() const { return static_cast<bool>(parts_->exact_levels); }
  std::optional<double> exact_level(int n, double beta) const;

  bool mirrored() const { return parts_->mirrored; }
  bool piecewise() const { return parts_->piecewise; }
  const std::string& name() const { return parts_->name; }

  /// Reflection x -> -x; class-five metadata follows s -> -s(-x).
  PotentialModel mirror() const;
  PotentialModel with_exact_levels(LevelFunction levels) const;
  PotentialModel with_name(std::string name) const;

  /// Energy scale for finite-difference steps: edge - v_min for wells,
  /// a ground-level estimate beta*sqrt(V''(x_min)/2) for confining wells.
  double energy_scale(double beta) const;

  const Parts& parts() const { return *parts_; }

 private:
  std::shared_ptr<const Parts> parts_;
};

PotentialModel build_class_five(const ClassFiveSpec& spec);

// Catalog families.
PotentialModel harmonic(double omega = 1.0);
PotentialModel morse(double depth, double a);
PotentialModel poschl_teller(double depth, double alpha = 1.0);
PotentialModel sturmian_family(double U, double r, double scale = 1.0);
PotentialModel perturbed_sturmian(double U, double r, double scale, double eta);

using FamilyParams = std::map<std::string, double, std::less<>>;

/// Dispatch by name: harmonic{omega}, morse{D,a}, poschl_teller{V0,alpha}
/// (alias tanh2{U,alpha}), sturmian_family{U,r,scale},
/// perturbed_sturmian{U,r,scale,eta}.
PotentialModel catalog(std::string_view name, const FamilyParams& params);

struct TableSample {
  double x = 0.0;
  double v = 0.0;
};

/// Monotone cubic (pchip) interpolant of tabulated samples, constant
/// beyond the table ends.
PotentialModel from_table(std::span<const TableSample> samples);

/// Two whitespace separated columns, '#' comment lines.
std::vector<TableSample> read_table(const std::string& path);
std::vector<TableSample> parse_table(std::string_view text);

}  // namespace semiquant
