#include "semiquant/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "semiquant/error.hpp"

namespace semiquant {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::Linear: return "linear";
    case Branch::Exponential: return "exponential";
    case Branch::Tanh: return "tanh";
    case Branch::Coth: return "coth";
    case Branch::Rational: return "rational";
    case Branch::Tan: return "tan";
  }
  return "unknown";
}

PotentialModel::PotentialModel(Parts parts)
    : parts_(std::make_shared<const Parts>(std::move(parts))) {
  if (!parts_->value || !parts_->derivative) {
    fail(ErrorCode::BadParams, "potential model needs value and derivative");
  }
}

double PotentialModel::value(double x) const {
  if (x <= parts_->x_lo || x >= parts_->x_hi) return kInf;
  return parts_->value(x);
}

double PotentialModel::derivative(double x) const { return parts_->derivative(x); }

double PotentialModel::second_derivative(double x) const {
  if (parts_->second_derivative) return parts_->second_derivative(x);
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (parts_->derivative(x + h) - parts_->derivative(x - h)) / (2.0 * h);
}

const Well& PotentialModel::well() const {
  if (!is_well()) fail(ErrorCode::BadParams, name() + " is confining");
  return std::get<Well>(parts_->asymptotics);
}

double PotentialModel::edge() const {
  if (const auto* w = std::get_if<Well>(&parts_->asymptotics)) return std::min(w->U, w->W);
  return kInf;
}

double PotentialModel::auxiliary(double x) const {
  if (!parts_->auxiliary) fail(ErrorCode::BadParams, name() + " has no auxiliary function");
  return parts_->auxiliary(x);
}

std::optional<double> PotentialModel::exact_level(int n, double beta) const {
  if (!parts_->exact_levels) fail(ErrorCode::NoClosedForm, name() + " has no closed-form spectrum");
  return parts_->exact_levels(n, beta);
}

PotentialModel PotentialModel::mirror() const {
  Parts p = *parts_;
  const auto src = parts_;
  p.value = [src](double x) { return src->value(-x); };
  p.derivative = [src](double x) { return -src->derivative(-x); };
  if (src->second_derivative) {
    p.second_derivative = [src](double x) { return src->second_derivative(-x); };
  }
  p.x_lo = -src->x_hi;
  p.x_hi = -src->x_lo;
  p.x_min = -src->x_min;
  if (src->auxiliary) p.auxiliary = [src](double x) { return -src->auxiliary(-x); };
  if (p.class_five) {
    p.class_five->B = -p.class_five->B;
    p.class_five->a1 = -p.class_five->a1;
    p.class_five->s0 = -p.class_five->s0;
  }
  if (auto* w = std::get_if<Well>(&p.asymptotics)) std::swap(w->U, w->W);
  p.mirrored = !src->mirrored;
  return PotentialModel(std::move(p));
}

PotentialModel PotentialModel::with_exact_levels(LevelFunction levels) const {
  Parts p = *parts_;
  p.exact_levels = std::move(levels);
  return PotentialModel(std::move(p));
}

PotentialModel PotentialModel::with_name(std::string name) const {
  Parts p = *parts_;
  p.name = std::move(name);
  return PotentialModel(std::move(p));
}

double PotentialModel::energy_scale(double beta) const {
  if (is_well()) return edge() - v_min();
  const double curvature = second_derivative(x_min());
  if (!(curvature > 0.0) || !std::isfinite(curvature)) return 1.0;
  return 2.0 * beta * std::sqrt(curvature / 2.0) * 0.5;
}

namespace {

// s(x) on one branch with s(0) = s*, plus the offset s(x) - s* computed
// without cancellation, the domain, and the limiting s at both ends.
struct AuxiliaryBranch {
  Branch branch = Branch::Linear;
  std::function<double(double)> s;
  std::function<double(double)> offset;
  double x_lo = -kInf;
  double x_hi = kInf;
  double s_lo = -kInf;
  double s_hi = kInf;
};

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::BadParams, std::string(what) + " must be finite");
  }
}

AuxiliaryBranch make_branch(const ClassFiveSpec& c) {
  const double s_star = c.s_at_minimum();
  AuxiliaryBranch b;
  if (c.a2 == 0.0 && c.a1 == 0.0) {
    const double a0 = c.a0;
    b.branch = Branch::Linear;
    b.s = [=](double x) { return s_star + a0 * x; };
    b.offset = [=](double x) { return a0 * x; };
    return b;
  }
  if (c.a2 == 0.0) {
    const double a1 = c.a1;
    const double fixed = -c.a0 / c.a1;
    if ((c.s0 - fixed) * (s_star - fixed) <= 0.0) {
      fail(ErrorCode::NoWell, "minimum of V lies off the exponential branch through s0");
    }
    const double amp = s_star - fixed;
    b.branch = Branch::Exponential;
    b.s = [=](double x) { return fixed + amp * std::exp(a1 * x); };
    b.offset = [=](double x) { return amp * std::expm1(a1 * x); };
    const double far = amp > 0.0 ? kInf : -kInf;
    if (a1 > 0.0) {
      b.s_lo = fixed;
      b.s_hi = far;
    } else {
      b.s_lo = far;
      b.s_hi = fixed;
    }
    return b;
  }

  const double a2 = c.a2;
  const double disc = c.discriminant();
  if (std::abs(disc) <= 1e-12) {
    // sigma = a2 (s - s1)^2, a2 > 0 after normalization.
    const double s1 = -c.a1 / (2.0 * a2);
    if ((c.s0 - s1) * (s_star - s1) <= 0.0) {
      fail(ErrorCode::NoWell, "minimum of V lies off the rational branch through s0");
    }
    const double pole = 1.0 / (a2 * (s_star - s1));
    b.branch = Branch::Rational;
    b.s = [=](double x) { return s1 - 1.0 / (a2 * (x - pole)); };
    b.offset = [=](double x) { return x / (a2 * pole * (pole - x)); };
    if (pole > 0.0) {
      b.x_hi = pole;
      b.s_lo = s1;
      b.s_hi = kInf;
    } else {
      b.x_lo = pole;
      b.s_lo = -kInf;
      b.s_hi = s1;
    }
    return b;
  }

  if (disc > 0.0) {
    const double q = std::sqrt(disc);
    double r1 = (-c.a1 - q) / (2.0 * a2);
    double r2 = (-c.a1 + q) / (2.0 * a2);
    if (r1 > r2) std::swap(r1, r2);
    const double mid = 0.5 * (r1 + r2);
    const double half = 0.5 * (r2 - r1);
    const double kappa = -a2 * half;
    if (c.s0 > r1 && c.s0 < r2) {
      if (!(s_star > r1 && s_star < r2)) {
        fail(ErrorCode::NoWell, "minimum of V lies outside the tanh branch (between the roots of sigma)");
      }
      const double u0 = std::atanh((s_star - mid) / half);
      b.branch = Branch::Tanh;
      b.s = [=](double x) { return mid + half * std::tanh(kappa * x + u0); };
      b.offset = [=](double x) {
        return half * std::sinh(kappa * x) / (std::cosh(kappa * x + u0) * std::cosh(u0));
      };
      b.s_lo = r1;
      b.s_hi = r2;
      return b;
    }
    const bool above = c.s0 > r2;
    if (above ? !(s_star > r2) : !(s_star < r1)) {
      fail(ErrorCode::NoWell, "minimum of V lies off the coth branch through s0");
    }
    const double y = (s_star - mid) / half;
    const double u0 = std::atanh(1.0 / y);
    const double pole = -u0 / kappa;
    b.branch = Branch::Coth;
    b.s = [=](double x) { return mid + half / std::tanh(kappa * x + u0); };
    b.offset = [=](double x) {
      return half * std::sinh(-kappa * x) / (std::sinh(kappa * x + u0) * std::sinh(u0));
    };
    if (above) {
      b.x_hi = pole;
      b.s_lo = r2;
      b.s_hi = kInf;
    } else {
      b.x_lo = pole;
      b.s_lo = -kInf;
      b.s_hi = r1;
    }
    return b;
  }

  // disc < 0: periodic tan branch, restricted to the period holding the minimum.
  const double mid = -c.a1 / (2.0 * a2);
  const double q = std::sqrt(-disc) / (2.0 * a2);
  const double kappa = a2 * q;
  const double u0 = std::atan((s_star - mid) / q);
  const double half_pi = 0.5 * std::acos(-1.0);
  b.branch = Branch::Tan;
  b.s = [=](double x) { return mid + q * std::tan(kappa * x + u0); };
  b.offset = [=](double x) {
    return q * std::sin(kappa * x) / (std::cos(kappa * x + u0) * std::cos(u0));
  };
  b.x_lo = (-half_pi - u0) / kappa;
  b.x_hi = (half_pi - u0) / kappa;
  return b;
}

double potential_limit(const ClassFiveSpec& c, double s_end) {
  if (!std::isfinite(s_end)) return kInf;
  const double d = s_end - c.s_at_minimum();
  return c.A * c.A * d * d + (c.C - c.B * c.B / (4.0 * c.A * c.A));
}

}  // namespace

PotentialModel build_class_five(const ClassFiveSpec& spec) {
  require_finite({spec.A, spec.B, spec.C, spec.a2, spec.a1, spec.a0, spec.s0}, "class-five coefficients");
  if (!(spec.A > 0.0)) fail(ErrorCode::BadParams, "A must be positive");

  ClassFiveSpec c = spec;
  const double sig0 = c.sigma(c.s0);
  const double mag = std::abs(c.a2 * c.s0 * c.s0) + std::abs(c.a1 * c.s0) + std::abs(c.a0);
  if (std::abs(sig0) <= 1e-14 * mag || mag == 0.0) {
    fail(ErrorCode::BranchEscape, "s0 is a fixed point of ds/dx; s(x) is constant");
  }
  if (sig0 < 0.0) {
    // s -> -s keeps V and makes s increasing.
    c.B = -c.B;
    c.a2 = -c.a2;
    c.a0 = -c.a0;
    c.s0 = -c.s0;
  }

  AuxiliaryBranch br = make_branch(c);
  c.branch = br.branch;

  const double A2 = c.A * c.A;
  const double v_min = c.C - c.B * c.B / (4.0 * A2);
  const double a2 = c.a2;
  const double a1 = c.a1;
  const double a0 = c.a0;
  auto s_fn = br.s;
  auto off_fn = br.offset;

  PotentialModel::Parts p;
  p.name = "class_five";
  p.value = [=](double x) {
    const double d = off_fn(x);
    return A2 * d * d + v_min;
  };
  p.derivative = [=](double x) {
    const double s = s_fn(x);
    return 2.0 * A2 * off_fn(x) * ((a2 * s + a1) * s + a0);
  };
  p.second_derivative = [=](double x) {
    const double s = s_fn(x);
    const double sig = (a2 * s + a1) * s + a0;
    return 2.0 * A2 * sig * sig + 2.0 * A2 * off_fn(x) * (2.0 * a2 * s + a1) * sig;
  };
  p.x_lo = br.x_lo;
  p.x_hi = br.x_hi;
  p.x_min = 0.0;
  p.v_min = v_min;
  p.auxiliary = s_fn;

  const double v_left = potential_limit(c, br.s_lo);
  const double v_right = potential_limit(c, br.s_hi);
  bool flip = false;
  if (std::isinf(v_left) && std::isinf(v_right)) {
    p.asymptotics = Confining{};
  } else if (v_left >= v_right) {
    p.asymptotics = Well{v_right, v_left};
  } else {
    p.asymptotics = Well{v_right, v_left};  // swapped by mirror()
    flip = true;
  }
  p.class_five = c;
  PotentialModel model(std::move(p));
  return flip ? model.mirror() : model;
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::BadParams, std::string(what) + " must be positive");
}

// V = depth * tanh^2(alpha x): eps_n = depth - beta^2 alpha^2 (lambda - 1 - n)^2.
LevelFunction tanh2_levels(double depth, double alpha) {
  return [=](int n, double beta) -> std::optional<double> {
    const double g = depth / (beta * beta * alpha * alpha);
    const double lambda = 0.5 + std::sqrt(0.25 + g);
    const double gap = lambda - 1.0 - n;
    if (n < 0 || !(gap > 0.0)) return std::nullopt;
    return depth - beta * beta * alpha * alpha * gap * gap;
  };
}

// sturmian_family with r > 1 is a hyperbolic Rosen-Morse well in
// z = kappa x, kappa = scale (r + 1) / 2:
// V = c + beta^2 kappa^2 (a tanh^2 z + 2 b tanh z), bound while (lambda - n)^2 > b.
LevelFunction asymmetric_levels(double U, double r, double scale) {
  return [=](int n, double beta) -> std::optional<double> {
    const double kappa = 0.5 * scale * (r + 1.0);
    const double a = U / (beta * beta * scale * scale);
    const double b = a * (r - 1.0) / (r + 1.0);
    const double c = 0.25 * U * (r - 1.0) * (r - 1.0);
    const double lambda = -0.5 + std::sqrt(0.25 + a);
    const double gap = lambda - n;
    if (n < 0 || !(gap * gap > b)) return std::nullopt;
    return c + beta * beta * kappa * kappa * (a - gap * gap - b * b / (gap * gap));
  };
}

}  // namespace

PotentialModel harmonic(double omega) {
  require_positive(omega, "omega");
  ClassFiveSpec c{.A = omega, .B = 0.0, .C = 0.0, .a2 = 0.0, .a1 = 0.0, .a0 = 1.0, .s0 = 0.0};
  return build_class_five(c)
      .with_exact_levels([omega](int n, double beta) -> std::optional<double> {
        if (n < 0) return std::nullopt;
        return 2.0 * beta * omega * (n + 0.5);
      })
      .with_name("harmonic");
}

PotentialModel morse(double depth, double a) {
  require_positive(depth, "D");
  require_positive(a, "a");
  // s = exp(-a x), V = D (1 - s)^2.
  ClassFiveSpec c{.A = std::sqrt(depth), .B = -2.0 * depth, .C = depth, .a2 = 0.0, .a1 = -a, .a0 = 0.0, .s0 = 1.0};
  return build_class_five(c)
      .with_exact_levels([depth, a](int n, double beta) -> std::optional<double> {
        const double lambda = std::sqrt(depth) / (a * beta);
        const double gap = lambda - n - 0.5;
        if (n < 0 || !(gap > 0.0)) return std::nullopt;
        return depth - beta * beta * a * a * gap * gap;
      })
      .with_name("morse");
}

PotentialModel poschl_teller(double depth, double alpha) {
  require_positive(depth, "V0");
  require_positive(alpha, "alpha");
  ClassFiveSpec c{.A = std::sqrt(depth), .B = 0.0, .C = 0.0, .a2 = -alpha, .a1 = 0.0, .a0 = alpha, .s0 = 0.0};
  return build_class_five(c).with_exact_levels(tanh2_levels(depth, alpha)).with_name("poschl_teller");
}

PotentialModel sturmian_family(double U, double r, double scale) {
  require_positive(U, "U");
  require_positive(scale, "scale");
  if (!(r >= 1.0) || !std::isfinite(r)) fail(ErrorCode::BadParams, "r must satisfy r >= 1 (W >= U)");
  // sigma = scale (1 + s)(r - s): V -> U at s = -1 and W = r^2 U at s = r.
  ClassFiveSpec c{.A = std::sqrt(U), .B = 0.0, .C = 0.0, .a2 = -scale, .a1 = scale * (r - 1.0), .a0 = scale * r, .s0 = 0.0};
  const PotentialModel m = build_class_five(c).with_name("sturmian_family");
  return m.with_exact_levels(r == 1.0 ? tanh2_levels(U, scale) : asymmetric_levels(U, r, scale));
}

PotentialModel perturbed_sturmian(double U, double r, double scale, double eta) {
  if (!(eta >= 0.0 && eta <= 0.5)) fail(ErrorCode::BadParams, "eta must lie in [0, 0.5]");
  const PotentialModel base = sturmian_family(U, r, scale);
  const ClassFiveSpec c = *base.class_five();
  // V = U s^2 (1 - eta w p(s)), p = sigma/scale vanishes at both asymptotes,
  // w normalizes max p to 1 so both U and W are kept.
  const double w = 4.0 / ((r + 1.0) * (r + 1.0));
  const double ew = eta * w;
  const auto sfn = base.parts().auxiliary;

  auto pieces = [=](double s, double& g1, double& g2, double& sig, double& dsig) {
    sig = c.sigma(s);
    dsig = 2.0 * c.a2 * s + c.a1;
    const double p = sig / scale;
    const double dp = dsig / scale;
    const double ddp = 2.0 * c.a2 / scale;
    g1 = U * (2.0 * s * (1.0 - ew * p) - ew * s * s * dp);
    g2 = U * (2.0 * (1.0 - ew * p) - 4.0 * ew * s * dp - ew * s * s * ddp);
  };

  PotentialModel::Parts p;
  p.name = "perturbed_sturmian";
  p.value = [=](double x) {
    const double s = sfn(x);
    return U * s * s * (1.0 - ew * c.sigma(s) / scale);
  };
  p.derivative = [=](double x) {
    double g1, g2, sig, dsig;
    pieces(sfn(x), g1, g2, sig, dsig);
    return g1 * sig;
  };
  p.second_derivative = [=](double x) {
    double g1, g2, sig, dsig;
    pieces(sfn(x), g1, g2, sig, dsig);
    return (g2 * sig + g1 * dsig) * sig;
  };
  p.asymptotics = base.asymptotics();
  p.x_min = 0.0;
  p.v_min = 0.0;
  p.auxiliary = sfn;
  p.mirrored = base.mirrored();
  return PotentialModel(std::move(p));
}

namespace {

double param(const FamilyParams& params, std::string_view key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const FamilyParams& params, std::initializer_list<std::string_view> allowed, std::string_view family) {
  for (const auto& [key, _] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorCode::BadParams, "parameter '" + key + "' is not used by family " + std::string(family));
    }
  }
}

}  // namespace

PotentialModel catalog(std::string_view name, const FamilyParams& params) {
  if (name == "harmonic") {
    check_keys(params, {"omega"}, name);
    return harmonic(param(params, "omega", 1.0));
  }
  if (name == "morse") {
    check_keys(params, {"D", "a"}, name);
    return morse(param(params, "D", 10.0), param(params, "a", 1.0));
  }
  if (name == "poschl_teller") {
    check_keys(params, {"V0", "alpha"}, name);
    return poschl_teller(param(params, "V0", 6.0), param(params, "alpha", 1.0));
  }
  if (name == "tanh2") {
    check_keys(params, {"U", "alpha", "scale"}, name);
    const double alpha = param(params, "alpha", param(params, "scale", 1.0));
    return poschl_teller(param(params, "U", 6.0), alpha).with_name("tanh2");
  }
  if (name == "sturmian_family") {
    check_keys(params, {"U", "r", "scale"}, name);
    return sturmian_family(param(params, "U", 1.0), param(params, "r", 1.0), param(params, "scale", 1.0));
  }
  if (name == "perturbed_sturmian") {
    check_keys(params, {"U", "r", "scale", "eta"}, name);
    return perturbed_sturmian(param(params, "U", 1.0), param(params, "r", 1.0), param(params, "scale", 1.0),
                              param(params, "eta", 0.1));
  }
  fail(ErrorCode::UnknownFamily, std::string(name));
}

PotentialModel from_table(std::span<const TableSample> samples) {
  if (samples.size() < 8) fail(ErrorCode::TooFewSamples, "need at least 8 samples, got " + std::to_string(samples.size()));
  std::vector<double> xs, vs;
  xs.reserve(samples.size());
  vs.reserve(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.x) || !std::isfinite(s.v)) fail(ErrorCode::BadInput, "non-finite table entry");
    if (!xs.empty() && !(s.x > xs.back())) fail(ErrorCode::NonMonotoneX, "x must be strictly increasing");
    xs.push_back(s.x);
    vs.push_back(s.v);
  }

  // pchip extrema sit on data points, so unimodality of the data is
  // unimodality of the interpolant.
  const auto imin = static_cast<std::size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  for (std::size_t i = 1; i <= imin; ++i) {
    if (vs[i] > vs[i - 1]) fail(ErrorCode::MultiWell, "V rises before the global minimum");
  }
  for (std::size_t i = imin + 1; i < vs.size(); ++i) {
    if (vs[i] < vs[i - 1]) fail(ErrorCode::MultiWell, "V falls after the global minimum");
  }
  if (imin == 0 || imin + 1 == vs.size()) fail(ErrorCode::NoWell, "minimum sits on the table boundary");

  const double x_first = xs.front();
  const double x_last = xs.back();
  const double v_first = vs.front();
  const double v_last = vs.back();
  const double x_min = xs[imin];
  const double v_min = vs[imin];

  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto spline = std::make_shared<const Pchip>(std::move(xs), std::move(vs));

  PotentialModel::Parts p;
  p.name = "table";
  p.value = [=](double x) {
    if (x <= x_first) return v_first;
    if (x >= x_last) return v_last;
    return (*spline)(x);
  };
  p.derivative = [=](double x) {
    if (x <= x_first || x >= x_last) return 0.0;
    return spline->prime(x);
  };
  p.asymptotics = Well{v_last, v_first};
  p.x_min = x_min;
  p.v_min = v_min;
  p.piecewise = true;
  PotentialModel model(std::move(p));
  return v_first >= v_last ? model : model.mirror();
}

std::vector<TableSample> parse_table(std::string_view text) {
  std::vector<TableSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    TableSample s;
    std::string extra;
    if (!(fields >> s.x >> s.v) || (fields >> extra)) {
      fail(ErrorCode::BadInput, "table line " + std::to_string(lineno) + ": expected two numeric columns");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<TableSample> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadInput, "cannot open table file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

}  // namespace semiquant
