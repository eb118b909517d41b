#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "semiquant/error.hpp"
#include "semiquant/oracle.hpp"
#include "semiquant/potentials.hpp"

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

// |s'(x) - sigma(s(x))| on points between the asymptotic regions.
double auxiliary_residual(const PotentialModel& m, double lo, double hi) {
  const ClassFiveSpec& c = *m.class_five();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = lo + (hi - lo) * i / 99.0;
    const double h = 1e-5;
    const double ds = (m.auxiliary(x + h) - m.auxiliary(x - h)) / (2 * h);
    worst = std::max(worst, std::abs(ds - c.sigma(m.auxiliary(x))) / (1.0 + std::abs(ds)));
  }
  return worst;
}

std::vector<TableSample> sample(auto&& f, double lo, double hi, int n) {
  std::vector<TableSample> out;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    out.push_back({x, f(x)});
  }
  return out;
}

}  // namespace

TEST_CASE("tanh branch gives 2 tanh^2") {
  const auto m = build_class_five({.A = std::sqrt(2.0), .B = 0, .C = 0, .a2 = -1, .a1 = 0, .a0 = 1});
  CHECK(m.class_five()->branch == Branch::Tanh);
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) CHECK(m.value(x) == doctest::Approx(2 * std::pow(std::tanh(x), 2)).epsilon(1e-12));
  REQUIRE(m.is_well());
  CHECK(m.well().U == doctest::Approx(2.0));
  CHECK(m.well().W == doctest::Approx(2.0));
  CHECK(m.x_min() == 0.0);
  CHECK(m.v_min() == 0.0);
}

TEST_CASE("asymmetric branch limits are U and r^2 U") {
  const double U = 1.0, r = 3.0;
  const auto m = build_class_five({.A = std::sqrt(U), .B = 0, .C = 0, .a2 = -1, .a1 = r - 1, .a0 = r});
  REQUIRE(m.is_well());
  CHECK(m.well().U == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.well().W == doctest::Approx(9.0).epsilon(1e-12));
  // Built with V(+inf) = 9, so the constructor mirrors it.
  CHECK(m.mirrored());
  CHECK(m.value(40.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.value(-40.0) == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("linear branch is the harmonic well") {
  const auto m = build_class_five({.A = 1, .B = 0, .C = 0, .a2 = 0, .a1 = 0, .a0 = 1});
  CHECK(m.class_five()->branch == Branch::Linear);
  CHECK_FALSE(m.is_well());
  for (double x : {-4.0, -1.0, 0.3, 2.0}) {
    CHECK(m.auxiliary(x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(std::abs(m.value(x) - x * x) <= 1e-10 * (1 + x * x));
  }
}

TEST_CASE("exponential branch reproduces Morse pointwise") {
  const double D = 10, a = 1.3;
  const auto m = build_class_five({.A = std::sqrt(D), .B = -2 * D, .C = D, .a2 = 0, .a1 = -a, .a0 = 0, .s0 = 1});
  CHECK(m.class_five()->branch == Branch::Exponential);
  for (double x = -1.5; x <= 6; x += 0.25) {
    const double ref = D * std::pow(1 - std::exp(-a * x), 2);
    CHECK(std::abs(m.value(x) - ref) <= 1e-10 * (1 + ref));
  }
  CHECK(m.well().U == doctest::Approx(D));
  CHECK(std::isinf(m.well().W));
}

TEST_CASE("rational, coth and tan branches are single wells") {
  const auto rational = build_class_five({.A = 1, .B = 0, .C = 0, .a2 = 1, .a1 = 2, .a0 = 1, .s0 = 0});
  CHECK(rational.class_five()->branch == Branch::Rational);
  const auto coth = build_class_five({.A = 1, .B = -6, .C = 0, .a2 = -1, .a1 = 0, .a0 = 1, .s0 = 2});
  CHECK(coth.class_five()->branch == Branch::Coth);
  const auto tan = build_class_five({.A = 1, .B = 0, .C = 0, .a2 = 1, .a1 = 0, .a0 = 1});
  CHECK(tan.class_five()->branch == Branch::Tan);
  CHECK_FALSE(tan.is_well());
  CHECK(tan.x_lo() == doctest::Approx(-M_PI / 2));
  CHECK(tan.x_hi() == doctest::Approx(M_PI / 2));
  for (const auto* m : {&rational, &coth, &tan}) {
    CHECK(m->value(m->x_min()) == doctest::Approx(m->v_min()));
    const double lo = std::max(m->x_lo() + 0.3, -3.0), hi = std::min(m->x_hi() - 0.3, 3.0);
    CHECK(auxiliary_residual(*m, lo, hi) < 1e-8);
    for (double x = lo; x < hi; x += 0.1) {
      const double s = m->auxiliary(x);
      CHECK(std::abs(m->class_five()->potential(s) - m->value(x)) <= 1e-10 * (1 + std::abs(m->value(x))));
    }
  }
}

TEST_CASE("minimum off the branch is NoWell; fixed point is BranchEscape") {
  CHECK(code_of([] { build_class_five({.A = 1, .B = 2, .C = 0, .a2 = 0, .a1 = 1, .a0 = 0, .s0 = 1}); }) ==
        ErrorCode::NoWell);
  CHECK(code_of([] { build_class_five({.A = 1, .B = 0, .C = 0, .a2 = -1, .a1 = 0, .a0 = 1, .s0 = 1}); }) ==
        ErrorCode::BranchEscape);
  CHECK(code_of([] { build_class_five({.A = 0, .B = 0, .C = 0, .a2 = -1, .a1 = 0, .a0 = 1}); }) == ErrorCode::BadParams);
}

TEST_CASE("catalog families") {
  const auto h = catalog("harmonic", {{"omega", 1.0}});
  CHECK(h.value(1.5) == doctest::Approx(2.25));
  CHECK(*h.exact_level(3, 1.0) == doctest::Approx(7.0));

  const auto pt = catalog("poschl_teller", {{"V0", 6.0}, {"alpha", 1.0}});
  CHECK(pt.class_five()->a2 == -1.0);
  CHECK(pt.class_five()->A == doctest::Approx(std::sqrt(6.0)));
  CHECK(pt.value(0.8) == doctest::Approx(6 * std::pow(std::tanh(0.8), 2)));

  const auto st = catalog("sturmian_family", {{"U", 1.0}, {"r", 1.0}, {"scale", 1.0}});
  const auto t1 = poschl_teller(1.0, 1.0);
  for (double x : {-2.0, -0.1, 0.4, 3.0}) CHECK(st.value(x) == doctest::Approx(t1.value(x)).epsilon(1e-14));
  CHECK(st.has_exact_spectrum());

  const auto p = catalog("perturbed_sturmian", {{"U", 2.0}, {"eta", 0.2}});
  CHECK_FALSE(p.class_five().has_value());
  CHECK_FALSE(p.has_exact_spectrum());
  CHECK(p.value(30.0) == doctest::Approx(2.0));

  CHECK(code_of([] { catalog("square_well", {}); }) == ErrorCode::UnknownFamily);
  CHECK(code_of([] { catalog("sturmian_family", {{"U", 1.0}, {"r", 0.5}}); }) == ErrorCode::BadParams);
  CHECK(code_of([] { catalog("harmonic", {{"U", 1.0}}); }) == ErrorCode::BadParams);
}

TEST_CASE("catalog class members satisfy the auxiliary equation") {
  const std::vector<PotentialModel> members{harmonic(1.0), morse(10.0, 1.0), poschl_teller(6.0, 1.0),
                                            sturmian_family(4.0, 3.0, 1.0), sturmian_family(2.0, 5.0, 0.7)};
  for (const auto& m : members) CHECK(auxiliary_residual(m, -3.0, 3.0) < 1e-8);
}

TEST_CASE("derivatives agree with central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  const std::vector<PotentialModel> models{harmonic(1.3), morse(10.0, 1.0), poschl_teller(6.0, 1.0),
                                           sturmian_family(4.0, 3.0, 1.0), perturbed_sturmian(2.0, 2.0, 1.0, 0.2)};
  for (const auto& m : models) {
    for (int i = 0; i < 25; ++i) {
      const double x = xs(rng);
      const double h = 1e-5;
      const double fd = (m.value(x + h) - m.value(x - h)) / (2 * h);
      CHECK(std::abs(fd - m.derivative(x)) <= 1e-6 * (1 + std::abs(fd)));
      const double fd2 = (m.derivative(x + h) - m.derivative(x - h)) / (2 * h);
      CHECK(std::abs(fd2 - m.second_derivative(x)) <= 1e-6 * (1 + std::abs(fd2)));
    }
  }
}

TEST_CASE("well orientation W >= U >= v_min") {
  for (const auto& m : {sturmian_family(1.0, 3.0, 1.0), sturmian_family(4.0, 1.5, 2.0), morse(5.0, 2.0),
                        perturbed_sturmian(3.0, 2.0, 1.0, 0.1)}) {
    REQUIRE(m.is_well());
    CHECK(m.well().W >= m.well().U);
    CHECK(m.well().U >= m.v_min());
    CHECK(m.value(m.x_min()) == doctest::Approx(m.v_min()));
    // Unimodal: V decreases towards x_min from both sides.
    double prev = m.value(m.x_min() - 6.0);
    for (double x = m.x_min() - 6.0; x <= m.x_min(); x += 0.05) {
      CHECK(m.value(x) <= prev + 1e-12);
      prev = m.value(x);
    }
  }
}

TEST_CASE("tabulated harmonic well") {
  const auto m = from_table(sample([](double x) { return x * x; }, -4, 4, 81));
  CHECK(m.value(1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(m.class_five().has_value());
  CHECK(m.well().U == doctest::Approx(16.0));
}

TEST_CASE("tabulated tanh^2 asymptotes") {
  const auto m = from_table(sample([](double x) { return 6 * std::pow(std::tanh(x), 2); }, -8, 8, 161));
  CHECK(std::abs(m.well().U - 6.0) < 1e-3);
  CHECK(std::abs(m.well().W - 6.0) < 1e-3);
}

TEST_CASE("table errors") {
  CHECK(code_of([] { from_table(sample([](double x) { return x * x; }, -1, 1, 5)); }) == ErrorCode::TooFewSamples);
  auto bad = sample([](double x) { return x * x; }, -1, 1, 20);
  std::swap(bad[3], bad[4]);
  CHECK(code_of([&] { from_table(bad); }) == ErrorCode::NonMonotoneX);
  CHECK(code_of([] { from_table(sample([](double x) { return std::cos(3 * x); }, -3, 3, 60)); }) ==
        ErrorCode::MultiWell);
}

TEST_CASE("table text parsing") {
  const auto s = parse_table("# x V\n-1 1\n0 0\n  1   1\n\n# end\n");
  REQUIRE(s.size() == 3);
  CHECK(s[2].x == 1.0);
  CHECK(code_of([] { parse_table("1 2 junk\n"); }) == ErrorCode::BadInput);
}

TEST_CASE("mirrored table swaps U and W and keeps the spectrum") {
  auto f = [](double x) { return x < 0 ? 9.0 * std::pow(std::tanh(x), 2) : 4.0 * std::pow(std::tanh(x), 2); };
  const auto samples = sample(f, -12, 12, 1201);
  std::vector<TableSample> flipped;
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) flipped.push_back({-it->x, it->v});
  const auto a = from_table(samples);
  const auto b = from_table(flipped);
  CHECK(a.well().U == doctest::Approx(b.well().U));
  CHECK(a.well().W == doctest::Approx(b.well().W));
  CHECK(a.mirrored() != b.mirrored());
  GridSolveConfig config;
  config.half_width = 11.5;
  config.auto_grow = false;
  const auto ea = grid_eigensolve(a, 1.0, config).energies;
  const auto eb = grid_eigensolve(b, 1.0, config).energies;
  REQUIRE(ea.size() == eb.size());
  REQUIRE(!ea.empty());
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(std::abs(ea[i] - eb[i]) < 1e-8);
}
