#pragma once

// First-passage-time moments of a 1D diffusion to a right target xc:
//  - the classical two-boundary formulas on [delta, xc] (absorption at
//    either end), and
//  - the singular-left-boundary formulas valid when the scale integral
//    diverges at x_l while the speed measure stays finite (entrance-type
//    boundaries), where the moments remain finite for every start point
//    down to and including x_l itself.
//
// All moments are computed from cached cumulative tables of the scale and
// speed densities (see detail/scale_tables.hpp); the recursion for higher
// moments tabulates M_{n-1} with exact nodal derivatives and refines the
// grid until the results are stable.

#include <vector>

#include "fpt/diffusion.hpp"

namespace fpt {

struct FptOptions {
  // Target relative accuracy of the underlying quadratures.
  double rel_tol = 1e-8;
  // Absolute floor, scaled by (xc - x_l); negative means "use default".
  double abs_tol = -1.0;
  // Grid density is doubled until moments move by less than this
  // (relative) under refinement.
  double refine_tol = 1e-6;
  // Initial and maximal grid points per dyadic octave.
  int start_per_octave = 16;
  int max_per_octave = 64;
};

struct MomentCurve {
  std::vector<double> start_points;           // x0 grid (ascending)
  double target = 0.0;                        // xc
  // moments[n-1][i] = n-th moment started at start_points[i], n = 1..N.
  std::vector<std::vector<double>> moments;
  // quadrature_error[n-1][i]: refinement-based absolute error estimate.
  std::vector<std::vector<double>> quadrature_error;
};

// Mean time to absorption at either delta or xc, started at x0:
//   2 (1-rho) \int_{x0}^{xc} S[z,xc] mu dz + 2 rho \int_delta^{x0} S[delta,z] mu dz,
// with rho = S[x0,xc] / S[delta,xc].
double mean_fpt_regular(const DiffusionModel& model, double delta, double x0,
                        double xc, const FptOptions& opt = {});

// Moments n = 1..n_max of the same two-boundary passage time (recursion
// with M_0 = 1, each level integrating the tabulated previous level).
MomentCurve moments_fpt_regular(const DiffusionModel& model, double delta,
                                double x0, double xc, int n_max,
                                const FptOptions& opt = {});

// Mean passage time to xc for a singular (entrance-type) left boundary:
//   2 \int_{x0}^{xc} S[z,xc] mu dz + 2 S[x0,xc] \int_{x_l}^{x0} mu dz.
// Requires the scale integral to diverge at x_l and the speed measure to be
// finite there (checked; ValidationError otherwise).
double mean_fpt_entrance(const DiffusionModel& model, double x0, double xc,
                         const FptOptions& opt = {});

// Mean passage time started at the boundary itself (the x0 = x_l limit,
// where the second term above vanishes).
double mean_fpt_from_boundary(const DiffusionModel& model, double xc,
                              const FptOptions& opt = {});

// Moments n = 1..n_max for the entrance-type case at one start point.
MomentCurve moments_fpt_entrance(const DiffusionModel& model, double x0,
                                 double xc, int n_max,
                                 const FptOptions& opt = {});

// Moments n = 1..n_max started at x_l.
MomentCurve moments_fpt_from_boundary(const DiffusionModel& model, double xc,
                                      int n_max, const FptOptions& opt = {});

// Batch evaluation over an ascending grid of start points in [x_l, xc],
// reusing one cached table set (entrance-type preconditions).
MomentCurve fpt_curve(const DiffusionModel& model,
                      const std::vector<double>& grid, double xc, int n_max,
                      const FptOptions& opt = {});

}  // namespace fpt
