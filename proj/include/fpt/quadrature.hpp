#pragma once

// Quadrature primitives shared by the diffusion and first-passage engines:
//  - adaptive Gauss-Kronrod integration on finite intervals,
//  - a single-panel 15-point rule for cumulative-table cells,
//  - an improper-integral evaluator for integrands singular at the left
//    endpoint, with explicit divergence detection over dyadic slabs.

#include <functional>

namespace fpt {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // error estimate (absolute)
};

// Adaptive Gauss-Kronrod (15-point) on [a, b].
QuadResult integrate_gk(const RealFn& f, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 15);

// Single-panel 15-point Gauss-Kronrod with embedded error estimate.
QuadResult integrate_gk15_panel(const RealFn& f, double a, double b);

enum class Divergence { Finite, Infinite, Inconclusive };

struct ImproperResult {
  Divergence tag = Divergence::Inconclusive;
  double value = 0.0;  // meaningful only when tag == Finite
  double error = 0.0;
};

// Improper integral of f over (x_l, x0] where f may blow up at x_l.
//
// Strategy: integrate the dyadic slabs [a_j, a_{j-1}], a_j = x_l +
// (x0 - x_l) 2^{-j}, j = 1..40, and classify from the increment sequence:
//  - Finite once trailing increments fall below 1e-10 of the running total,
//    or when the increments decay with a stable geometric ratio r < 0.98 (the
//    tail is then extrapolated by inc * r / (1 - r));
//  - Infinite when the increments fail to decay across the scan
//    (inc_40 / inc_4 > 1/2 catches logarithmic and slower divergence), when
//    they grow outright, or when the total overflows 1e12 x the first slab;
//  - Inconclusive otherwise.
//
// Known misclassification band: local behavior (x - x_l)^{-p} with
// 0.971 < p < 1 decays too slowly per octave to extrapolate yet too fast to
// flag cleanly, and is declared Infinite although the integral converges.
// The diffusion models in this library sit far from that band (their
// improper integrands are either ~(x - x_l)^{-1} and slower-divergent, or
// decay at least geometrically).
ImproperResult integrate_improper_left(const RealFn& f, double x_l, double x0,
                                       double rel_tol = 1e-9);

}  // namespace fpt
