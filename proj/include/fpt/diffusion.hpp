#pragma once

// One-dimensional Ito diffusion on an interval (x_l, x_c): scale and speed
// densities, scale/speed measures with divergence detection, boundary
// classification at the left endpoint, and the stationary density.
//
// Conventions:
//   scale density   s(y) = exp(-2 \int_{x_ref}^{y} m/sigma^2),
//   speed density   mu(y) = 1 / (sigma^2(y) s(y)),
//   S[a,b] = \int_a^b s,   N_l(x0) = \int_{x_l}^{x0} S[z,x0] mu(z) dz,
//   Sigma_l(x0) = \int_{x_l}^{x0} S(x_l,z] mu(z) dz.
// The reference point x_ref only fixes the arbitrary multiplicative constant
// in s; every classification result and passage-time moment is invariant
// under changing it (tested).

#include <functional>

#include "fpt/quadrature.hpp"

namespace fpt {

struct DiffusionModel {
  RealFn drift;         // m(x), units state/time
  RealFn diffusion_sq;  // sigma^2(x) > 0 on the open interior
  double x_l = 0.0;     // left boundary (may be singular)
  double x_c = 1.0;     // right end of the domain
  double x_ref = 0.5;   // reference point in (x_l, x_c)
};

// Validating factories. sigma^2 is sampled on a dense interior scan and must
// be strictly positive; x_ref defaults to the interval midpoint.
DiffusionModel make_diffusion_model(RealFn drift, RealFn diffusion_sq,
                                    double x_l, double x_c);
DiffusionModel make_diffusion_model(RealFn drift, RealFn diffusion_sq,
                                    double x_l, double x_c, double x_ref);

enum class BoundaryKind { Entrance, Reflecting, Exit, Regular, Unclassified };

const char* to_string(BoundaryKind kind);

// A nonnegative measure value that may be infinite. When the divergence
// scan is inconclusive, the partial sum is returned with
// estimate_error = +infinity (the documented "do not trust" sentinel).
struct MeasureValue {
  double value = 0.0;
  bool infinite = false;
  double estimate_error = 0.0;

  static MeasureValue finite(double v, double err) { return {v, false, err}; }
  static MeasureValue inf() { return {0.0, true, 0.0}; }
};

// s(y) for y in (x_l, x_c).
double scale_density(const DiffusionModel& model, double y);

// S[a,b] = \int_a^b s(y) dy for x_l <= a <= b <= x_c; a = x_l is the
// improper limit with divergence detection.
MeasureValue scale_measure(const DiffusionModel& model, double a, double b);

// mu(y) = 1/(sigma^2 s) for y in (x_l, x_c).
double speed_density(const DiffusionModel& model, double y);

// N_l(x0) = \int_{x_l}^{x0} S[z, x0] mu(z) dz (improper at x_l).
MeasureValue measure_N_l(const DiffusionModel& model, double x0);

// Sigma_l(x0) = \int_{x_l}^{x0} S(x_l, z] mu(z) dz (improper at x_l).
MeasureValue measure_Sigma_l(const DiffusionModel& model, double x0);

// Feller-type classification of the left boundary from the scale/speed
// measures: Entrance iff Sigma_l = inf and N_l < inf; Exit iff the scale
// integral converges while the speed measure diverges; Regular iff both
// converge. Reflecting requires a point mass of the speed measure at x_l,
// which a density-specified model never carries, so it is never produced by
// this function (the enum value exists for models where reflection is
// imposed as a boundary condition). Unclassified is the fallback when the
// numeric divergence tests are inconclusive.
BoundaryKind classify_left_boundary(const DiffusionModel& model);

// Normalized stationary density at x: proportional to mu(x), normalized over
// (x_l, x_c). Throws NumericalError if the normalization integral diverges.
double stationary_density(const DiffusionModel& model, double x);

// Same density as a reusable function (performs the normalization once).
std::function<double(double)> stationary_density_fn(const DiffusionModel& model);

}  // namespace fpt
