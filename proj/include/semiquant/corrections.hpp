#pragma once

#include "semiquant/potentials.hpp"

namespace semiquant {

/// delta_1 = beta * a2 / (8 A); independent of B and C.
double delta1_closed(const ClassFiveSpec& spec, double beta);

/// Exact class correction 2 d / (1 + sqrt(1 + 16 d^2)). Odd, |result| < 1/2.
double delta_class(double delta1);

/// Truncated series: order 1 gives d, order 3 gives d - 4 d^3.
double delta_series(double delta1, int order);

/// 2 d / (1 + t + sqrt((1 - t)^2 + 16 d^2)).
double delta_two_param(double delta1, double t);

/// Deviation parameter t = 8 Phi(U) |delta_1(U)| / k - 1. Zero for class
/// members, whose edge data obey delta_1 Phi = -k / 8.
double sturmian_t(double phi_edge, double delta1, double k);

/// b = 1 / (8 (N - 1/2)) for N bound states.
double small_parameter_b(int count);

}  // namespace semiquant
