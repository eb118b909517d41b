#pragma once

#include <vector>

#include "semiquant/potentials.hpp"

// Grid kernels behind the oracle. The default versions use OpenMP; the
// serial namespace holds reference implementations with identical
// arithmetic, so both produce bitwise-equal results.
namespace semiquant::kernels {

/// Symmetric tridiagonal matrix with a constant off-diagonal.
struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;
};

enum class Boundary { Dirichlet, Neumann };

/// Uniform grid on [a, b]. Dirichlet grids are vertex centred (n interior
/// nodes, h = (b - a) / (n + 1)); Neumann grids are cell centred
/// (h = (b - a) / n, nodes at cell midpoints).
struct Grid {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  Boundary boundary = Boundary::Dirichlet;

  double step() const { return boundary == Boundary::Dirichlet ? (b - a) / (n + 1) : (b - a) / n; }
  double node(int i) const {
    return boundary == Boundary::Dirichlet ? a + (i + 1) * step() : a + (i + 0.5) * step();
  }
};

/// Number of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& t, double x);

/// Discretization of -beta^2 d^2/dx^2 + V with the 3-point Laplacian.
Tridiagonal assemble(const PotentialModel& model, double beta, const Grid& grid);

/// The m smallest eigenvalues, ascending, by Sturm-sequence bisection.
std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int m);

namespace serial {
Tridiagonal assemble(const PotentialModel& model, double beta, const Grid& grid);
std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int m);
}  // namespace serial

/// Cap on worker threads (SEMIQUANT_THREADS); 0 leaves the OpenMP default.
void set_thread_limit(int threads);

}  // namespace semiquant::kernels
