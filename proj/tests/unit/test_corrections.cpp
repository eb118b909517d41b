#include <doctest.h>

#include <cmath>
#include <random>

#include "semiquant/corrections.hpp"
#include "semiquant/error.hpp"

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

}  // namespace

TEST_CASE("closed-form delta1") {
  CHECK(delta1_closed({.A = 3.0, .a2 = 0.0, .a1 = -1.0, .a0 = 0.0}, 1.0) == 0.0);
  CHECK(delta1_closed({.A = std::sqrt(6.0), .a2 = -1.0}, 1.0) == doctest::Approx(-0.0510310).epsilon(1e-6));
  CHECK(delta1_closed({.A = std::sqrt(2.0), .a2 = -1.0}, 1.0) == doctest::Approx(-0.0883883).epsilon(1e-6));
  // Shifting V by a constant leaves it unchanged.
  CHECK(delta1_closed({.A = 2.0, .B = 1.0, .C = 7.0, .a2 = -0.5}, 0.3) ==
        delta1_closed({.A = 2.0, .B = 1.0, .C = -4.0, .a2 = -0.5}, 0.3));
  CHECK(code_of([] { delta1_closed({.A = 0.0}, 1.0); }) == ErrorCode::BadParams);
}

TEST_CASE("class map values") {
  CHECK(delta_class(0.0) == 0.0);
  CHECK(delta_class(-0.0883883476483184) == doctest::Approx(std::sqrt(2.0) - 1.5).epsilon(1e-12));
  CHECK(delta_class(1e300) == doctest::Approx(0.5));
  CHECK(delta_class(-1e300) == doctest::Approx(-0.5));
  CHECK(std::abs(delta_class(1e8) - (0.5 - 1.0 / (8e8))) < 1e-15);
}

TEST_CASE("class map is odd, increasing and bounded") {
  double prev = -0.5;
  for (double x = -1e6; x <= 1e6;) {
    const double v = delta_class(x);
    CHECK(v == -delta_class(-x));
    CHECK(std::abs(v) < 0.5);
    CHECK(v > prev);
    prev = v;
    x = x < -1 ? x / 1.5 : (x < 1 ? x + 0.01 : x * 1.5);
  }
}

TEST_CASE("class map agrees with the cubic series to fifth order") {
  // The next series term is 32 x^5.
  for (double x : {1e-1, 1e-2, 1e-3}) {
    const double ratio = std::abs(delta_class(x) - delta_series(x, 3)) / std::pow(x, 5);
    CHECK(ratio < 100.0);
    if (x < 0.05) CHECK(ratio == doctest::Approx(32.0).epsilon(0.01));
  }
}

TEST_CASE("series") {
  CHECK(delta_series(0.05, 3) == doctest::Approx(0.0495).epsilon(1e-14));
  CHECK(delta_series(0.7, 1) == 0.7);
  CHECK(code_of([] { delta_series(0.3, 3); }) == ErrorCode::SeriesDiverges);
  CHECK(code_of([] { delta_series(0.1, 2); }) == ErrorCode::BadParams);
}

TEST_CASE("two-parameter map") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng);
    CHECK(std::abs(delta_two_param(x, 0.0) - delta_class(x)) <= 1e-12);
  }
  const double small = delta_two_param(-0.05, 0.1);
  CHECK(std::abs(small - (-0.05 - 4 * std::pow(-0.05, 3) * 1.1)) < 1e-5);
  CHECK(delta_two_param(0.0, 0.4) == 0.0);
  CHECK(delta_two_param(0.0, -3.0) == 0.0);
  // The denominator is positive for every finite input; only NaN reaches the guard.
  CHECK(delta_two_param(0.0, -1.0) == 0.0);
  CHECK(std::isfinite(delta_two_param(1e-300, -1e300)));
  CHECK(code_of([] { delta_two_param(0.1, std::nan("")); }) == ErrorCode::DegenerateDenominator);
}

TEST_CASE("two-parameter map is stable for t near -1") {
  // Exact: 2d / (1 + t + sqrt((1-t)^2 + 16 d^2)) evaluated in long double.
  for (double t : {-1.5, -1.0 + 1e-9, -0.999}) {
    for (double d : {1e-6, -3e-4, 0.2}) {
      const long double lt = t, ld = d;
      const long double ref = 2 * ld / (1 + lt + std::sqrt((1 - lt) * (1 - lt) + 16 * ld * ld));
      if (std::abs(1 + t + std::sqrt((1 - t) * (1 - t) + 16 * d * d)) < 1e-13) continue;
      CHECK(delta_two_param(d, t) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
    }
  }
}

TEST_CASE("deviation parameter") {
  CHECK(sturmian_t(std::sqrt(2.0), -1.0 / (8.0 * std::sqrt(2.0)), 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sturmian_t(1.0, -0.15, 1.0) == doctest::Approx(0.2).epsilon(1e-14));
  // Class members with k < 1 obey delta1 Phi = -k / 8.
  const double k = 1.0 - std::sqrt(0.5), phi = 0.7;
  CHECK(std::abs(sturmian_t(phi, -k / (8 * phi), k)) < 1e-15);
  CHECK(code_of([] { sturmian_t(1.0, 0.1, 1.5); }) == ErrorCode::BadParams);
}

TEST_CASE("small parameter b") {
  CHECK(small_parameter_b(1) == 0.25);
  CHECK(small_parameter_b(3) == doctest::Approx(0.05));
  CHECK(code_of([] { small_parameter_b(0); }) == ErrorCode::BadCount);
}

TEST_CASE("composite delta tends to -1/2 + Phi") {
  double c0 = 0.0;
  for (double phi : {0.1, 0.05, 0.025}) {
    const double d1 = -1.0 / (8.0 * phi);
    const double delta = delta_two_param(d1, sturmian_t(phi, d1, 1.0));
    const double c = std::abs(delta + 0.5 - phi) / (phi * phi);
    if (c0 == 0.0) c0 = c;
    CHECK(c <= 2.0 * c0);
    CHECK(c >= 0.5 * c0);
  }
}
