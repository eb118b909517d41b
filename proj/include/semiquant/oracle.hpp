#pragma once

#include <string>
#include <vector>

#include "semiquant/kernels.hpp"
#include "semiquant/potentials.hpp"
#include "semiquant/sturmian.hpp"

namespace semiquant {

using kernels::Boundary;

struct GridSolveConfig {
  double half_width = 0.0;  // L; <= 0 picks the smallest L passing the asymptote check
  int points = 2000;
  int levels_wanted = 0;  // 0: every level below min(U, W); required for confining wells
  Boundary boundary = Boundary::Dirichlet;
  bool auto_grow = true;    // grow L (x2, at most 4 times) for weakly decaying states
  bool auto_refine = true;  // double the points until the two grids agree to 1e-5
  int max_points = 1 << 19;
};

struct GridSpectrum {
  std::vector<double> energies;  // Richardson extrapolated, ascending
  std::vector<double> errors;    // |extrapolated - fine|
  double half_width = 0.0;
  int points = 0;  // coarse grid size of the accepted pair
};

/// Eigenvalues of -beta^2 psi'' + V psi = eps psi on [x_min - L, x_min + L]
/// (clipped to the model's domain), from a coarse grid of `points` nodes and
/// a fine grid of half the step, combined as (4 fine - coarse) / 3.
GridSpectrum grid_eigensolve(const PotentialModel& model, double beta, const GridSolveConfig& config = {});

/// Levels from the stored closed form; all bound levels for wells, the
/// first max_levels for confining potentials.
std::vector<double> closed_form_spectrum(const PotentialModel& model, double beta, int max_levels = 64);

/// Number of bound states below min(U, W), counted on a zero-flux box.
int bound_state_count(const PotentialModel& model, double beta, const GridSolveConfig& config = {});

/// Measured order p of the unextrapolated level `index` from grids of N,
/// 2N+1 and 4N+3 nodes (the step halves each time).
double grid_convergence_order(const PotentialModel& model, double beta, int index, const GridSolveConfig& config);

/// Smallest L whose box edges sit within 1e-8 * energy scale of the
/// finite asymptotes.
double asymptotic_half_width(const PotentialModel& model, double beta);

struct OracleThresholdOptions {
  double U_max = 1e4;
  double rel_tol = 1e-6;
};

/// Bisection in U where the grid bound-state count steps from n to n + 1.
ThresholdResult threshold_U_oracle(const SturmianFamily& family, int n, double beta,
                                   const OracleThresholdOptions& options = {});

}  // namespace semiquant
