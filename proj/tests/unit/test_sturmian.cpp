#include <doctest.h>

#include <cmath>
#include <vector>

#include "semiquant/corrections.hpp"
#include "semiquant/error.hpp"
#include "semiquant/oracle.hpp"
#include "semiquant/sturmian.hpp"

using namespace semiquant;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadInput;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("shape factor") {
  CHECK(shape_factor_k(1.0) == 1.0);
  CHECK(shape_factor_k(3.0) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
  double prev = 1.0;
  for (double r : {1.5, 3.0, 10.0, 1e3, 1e6}) {
    const double k = shape_factor_k(r);
    CHECK(k < prev);
    CHECK(k > 0.0);
    prev = k;
  }
  CHECK(shape_factor_k(1e12) < 1e-6);
  CHECK(code_of([] { shape_factor_k(0.5); }) == ErrorCode::BadRatio);
}

TEST_CASE("edge phase") {
  const auto tanh2 = SturmianFamily::class_member(1.0);
  const auto r3 = SturmianFamily::class_member(3.0);
  CHECK(phase_at_edge(tanh2, 2.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(phase_at_edge(r3, 1.0, 1.0) == doctest::Approx(0.29289321881345248).epsilon(1e-14));
  CHECK(std::abs(edge_phase_numeric(tanh2(2.0), 1.0) - std::sqrt(2.0)) < 1e-6);
  CHECK(std::abs(edge_phase_numeric(r3(4.0), 1.0) - 2.0 * shape_factor_k(3.0)) < 1e-6);
  CHECK(std::abs(edge_phase_numeric(sturmian_family(9.0, 2.0, 0.5), 0.7) -
                 3.0 * shape_factor_k(2.0) / (0.7 * 0.5)) < 1e-6);
}

TEST_CASE("edge phase rejects slow tails") {
  // 1 - 1/(1+x^2) approaches its asymptote algebraically.
  PotentialModel::Parts p;
  p.name = "lorentzian";
  p.value = [](double x) { return 1.0 - 1.0 / (1.0 + x * x); };
  p.derivative = [](double x) { return 2.0 * x / ((1.0 + x * x) * (1.0 + x * x)); };
  p.asymptotics = Well{1.0, 1.0};
  p.x_min = 0.0;
  p.v_min = 0.0;
  const PotentialModel lorentz(p);
  CHECK(code_of([&] { edge_phase_numeric(lorentz, 1.0); }) == ErrorCode::TailNonConvergent);
}

TEST_CASE("threshold condition") {
  CHECK(code_of([] { threshold_condition(0, 1.0, 1.0); }) == ErrorCode::NoRealRoot);
  CHECK(threshold_condition(1, 1.0, 1.0) == doctest::Approx((12.0 + std::sqrt(112.0)) / 16.0).epsilon(1e-14));
  CHECK(threshold_condition(1, 1.0, 1.0) == doctest::Approx(1.411438).epsilon(1e-6));
  CHECK(threshold_condition(2, 1.0, 1.0) == doctest::Approx(2.448958).epsilon(1e-6));
  // n = 0 has a positive root once k <= 1/2.
  CHECK(threshold_condition(0, 0.5, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  const double k = shape_factor_k(3.0);
  const double phi = threshold_condition(0, k, 1.0);
  CHECK(8 * phi * phi - 4 * phi + k == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("refined delta at the edge") {
  const double phi = std::sqrt(6.0);
  const double d1 = -1.0 / (8.0 * phi);
  CHECK(refined_delta_U(phi, d1, 1.0) == delta_class(d1));
  CHECK(refined_delta_U(phi, d1, 1.0) == doctest::Approx(-0.0505103).epsilon(1e-6));
  CHECK(std::abs(refined_delta_U(0.05, -1.0 / (8 * 0.05), 1.0) + 0.45) < 0.01);
  // Class inputs on an asymmetric well: t vanishes with the k-corrected edge identity.
  const double k = shape_factor_k(3.0);
  CHECK(refined_delta_U(2.0, -k / 16.0, k) == delta_class(-k / 16.0));
}

TEST_CASE("limit towards vanishing phase") {
  std::vector<double> c;
  for (double phi : {0.1, 0.05, 0.025}) {
    c.push_back(std::abs(refined_delta_U(phi, -1.0 / (8 * phi), 1.0) + 0.5 - phi) / (phi * phi));
  }
  CHECK(c[1] <= 2 * c[0]);
  CHECK(c[2] <= 2 * c[0]);
  CHECK(c[1] >= c[0] / 2);
}

TEST_CASE("edge identity on the class families") {
  for (double r : {1.0, 3.0}) {
    const auto fam = SturmianFamily::class_member(r);
    const double k = fam.k(1.0);
    for (int i = 0; i < 10; ++i) {
      const double U = 0.5 + 5.0 * i;
      const auto model = fam(U);
      const double d1 = delta1_closed(*model.class_five(), 1.0);
      CHECK(std::abs(d1 * phase_at_edge(fam, U, 1.0) + k / 8.0) < 1e-12);
    }
  }
}

TEST_CASE("thresholds of the tanh2 family") {
  const auto fam = SturmianFamily::class_member(1.0);
  for (int n = 1; n <= 3; ++n) {
    const double exact = n * (n + 1.0);
    const auto refined = threshold_U(fam, n, 1.0, ThresholdMethod::RefinedDelta);
    CHECK(rel(refined.U, exact) < 1e-9);
    CHECK(std::abs(refined.t) < 1e-12);
  }
  const auto u1 = threshold_U(fam, 1, 1.0, ThresholdMethod::Condition21);
  CHECK(u1.U == doctest::Approx(1.992158).epsilon(1e-6));
  double prev = rel(u1.U, 2.0);
  for (int n = 2; n <= 4; ++n) {
    const double err = rel(threshold_U(fam, n, 1.0, ThresholdMethod::Condition21).U, n * (n + 1.0));
    const double b = small_parameter_b(n + 1);
    CHECK(err < prev);
    CHECK(err <= std::max(3 * b * b * b, 1e-3));
    prev = err;
  }
  CHECK(code_of([&] { threshold_U(fam, 0, 1.0, ThresholdMethod::Condition21); }) == ErrorCode::NoRealRoot);
  // beta^2 scaling.
  CHECK(rel(threshold_U(fam, 2, 0.5, ThresholdMethod::RefinedDelta).U, 6.0 * 0.25) < 1e-9);
}

TEST_CASE("thresholds of the asymmetric family") {
  const auto fam = SturmianFamily::class_member(3.0);
  const auto n0 = threshold_U(fam, 0, 1.0, ThresholdMethod::RefinedDelta);
  CHECK(rel(n0.U, 2.0) < 1e-9);
  CHECK(rel(threshold_U(fam, 2, 1.0, ThresholdMethod::RefinedDelta).U, 72.0) < 1e-9);
  CHECK(rel(threshold_U(fam, 2, 1.0, ThresholdMethod::Condition21).U, 72.0) < 1e-4);
  const auto oracle = threshold_U_oracle(fam, 1, 1.0);
  CHECK(rel(threshold_U(fam, 1, 1.0, ThresholdMethod::RefinedDelta).U, oracle.U) < 1e-5);
}

TEST_CASE("fixed-W sweep") {
  const auto fam = SturmianFamily::fixed_w(40.0);
  CHECK(!fam.has_fixed_ratio());
  CHECK(fam.ratio(10.0) == doctest::Approx(2.0));
  const auto u = threshold_U(fam, 1, 1.0, ThresholdMethod::Condition21);
  CHECK(u.U > 0.0);
  CHECK(u.U < 40.0);
  const double phi = phase_at_edge(fam, u.U, 1.0);
  CHECK(phi == doctest::Approx(threshold_condition(1, fam.k(u.U), 1.0)).epsilon(1e-9));
}

TEST_CASE("off-class thresholds degrade with the perturbation") {
  std::vector<double> errs;
  for (double eta : {0.05, 0.1, 0.2}) {
    const auto fam = SturmianFamily::perturbed(1.0, 1.0, eta);
    const auto refined = threshold_U(fam, 1, 1.0, ThresholdMethod::RefinedDelta);
    const auto oracle = threshold_U_oracle(fam, 1, 1.0);
    errs.push_back(rel(refined.U, oracle.U));
  }
  CHECK(errs[0] < errs[1]);
  CHECK(errs[1] < errs[2]);
  CHECK(errs[2] < 0.2 * 0.2);
}
