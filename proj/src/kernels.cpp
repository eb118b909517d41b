#include "semiquant/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace semiquant::kernels {

namespace {

double diagonal_entry(const PotentialModel& model, double inv_h2, const Grid& grid, int i) {
  const double v = model.value(grid.node(i));
  const bool end = i == 0 || i == grid.n - 1;
  const double kinetic = (grid.boundary == Boundary::Neumann && end) ? inv_h2 : 2.0 * inv_h2;
  return kinetic + v;
}

// Eigenvalue index k (0-based) by bisection on the Sturm count.
double bisect_index(const Tridiagonal& t, int k, double lo, double hi) {
  for (int iter = 0; iter < 256; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void gershgorin(const Tridiagonal& t, double& lo, double& hi) {
  const double r = 2.0 * std::abs(t.off);
  const auto [mn, mx] = std::minmax_element(t.diag.begin(), t.diag.end());
  lo = *mn - r;
  hi = *mx + r;
}

}  // namespace

int sturm_count(const Tridiagonal& t, double x) {
  const double e2 = t.off * t.off;
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = t.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

Tridiagonal assemble(const PotentialModel& model, double beta, const Grid& grid) {
  const double h = grid.step();
  const double inv_h2 = beta * beta / (h * h);
  Tridiagonal t{std::vector<double>(static_cast<std::size_t>(grid.n)), -inv_h2};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid.n; ++i) t.diag[static_cast<std::size_t>(i)] = diagonal_entry(model, inv_h2, grid, i);
  return t;
}

std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int m) {
  m = std::min<int>(m, static_cast<int>(t.diag.size()));
  std::vector<double> out(static_cast<std::size_t>(std::max(m, 0)));
  if (m <= 0) return out;
  double lo, hi;
  gershgorin(t, lo, hi);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < m; ++k) out[static_cast<std::size_t>(k)] = bisect_index(t, k, lo, hi);
  return out;
}

namespace serial {

Tridiagonal assemble(const PotentialModel& model, double beta, const Grid& grid) {
  const double h = grid.step();
  const double inv_h2 = beta * beta / (h * h);
  Tridiagonal t{std::vector<double>(static_cast<std::size_t>(grid.n)), -inv_h2};
  for (int i = 0; i < grid.n; ++i) t.diag[static_cast<std::size_t>(i)] = diagonal_entry(model, inv_h2, grid, i);
  return t;
}

std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int m) {
  m = std::min<int>(m, static_cast<int>(t.diag.size()));
  std::vector<double> out(static_cast<std::size_t>(std::max(m, 0)));
  if (m <= 0) return out;
  double lo, hi;
  gershgorin(t, lo, hi);
  for (int k = 0; k < m; ++k) out[static_cast<std::size_t>(k)] = bisect_index(t, k, lo, hi);
  return out;
}

}  // namespace serial

void set_thread_limit(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace semiquant::kernels
