#pragma once

// Internal cached representation of the scale/speed geometry of a diffusion
// on (x_l, xc]. Built once per (model, xc) pair and then evaluated cheaply:
//
//   phi(y)   = -2 \int_{anchor}^{y} m/sigma^2   (cubic Hermite, exact slopes)
//   s(y)     = exp(phi(y)),  mu(y) = exp(-phi(y)) / sigma^2(y)
//   SInt(y)  = \int_y^{xc} s          (decreasing cumulative, SInt(xc) = 0)
//   SLInt(y) = \int_{x_inner}^{y} s   (cumulative from the innermost node)
//   MuInt(y) = \int_{x_l}^{y} mu      (includes an extrapolated left tail)
//
// The anchor is the grid node nearest to x_ref (clamped into the grid); all
// downstream quantities are products s*mu or ratios of S-values, which are
// invariant under that shift of anchor. The node grid clusters dyadically
// toward x_l (octaves of width halving down to ~2^-48 of the domain) so the
// tables resolve singular behavior of s and mu at the left boundary.

#include <vector>

#include "fpt/diffusion.hpp"
#include "fpt/interp.hpp"

namespace fpt::detail {

struct TableOptions {
  int max_octaves = 48;   // dyadic refinement depth at the left boundary
  int per_octave = 16;    // grid points per octave (and per uniform sixth)
  double rel_tol = 1e-9;  // per-cell quadrature tolerance
};

class ScaleTables {
 public:
  ScaleTables(const DiffusionModel& model, double xc, const TableOptions& opt);

  double x_l() const { return x_l_; }
  double xc() const { return xc_; }
  const std::vector<double>& nodes() const { return phi_.nodes(); }

  double phi(double y) const { return phi_(y); }
  double s(double y) const;
  double mu(double y) const;

  double SInt(double y) const { return sint_(y); }
  double SLInt(double y) const { return slint_(y); }
  double MuInt(double y) const { return muint_(y); }

  // \int_{x_l}^{x_inner} mu, and whether that tail converged.
  double mu_tail() const { return mu_tail_; }
  bool mu_tail_finite() const { return mu_tail_finite_; }

  // Accumulated quadrature error of the cumulative cell sums.
  double table_error() const { return table_error_; }

  // Node-indexed raw values (ascending grid), for building further
  // cumulatives on the same cells.
  const std::vector<double>& node_s() const { return node_s_; }
  const std::vector<double>& node_mu() const { return node_mu_; }
  const std::vector<double>& node_SInt() const { return sint_.values(); }
  const std::vector<double>& node_MuInt() const { return muint_.values(); }

  // Integrate f over one grid cell [x_i, x_{i+1}] with a 15-point panel,
  // adding the panel's error estimate to *err_acc if given.
  double integrate_cell(std::size_t i, const RealFn& f,
                        double* err_acc = nullptr) const;

 private:
  double x_l_ = 0.0;
  double xc_ = 0.0;
  RealFn sigma_sq_;     // the model's diffusion_sq (for pointwise mu)
  HermiteTable phi_;    // exponent of the scale density
  HermiteTable sint_;   // \int_y^{xc} s
  HermiteTable slint_;  // \int_{x_inner}^{y} s
  HermiteTable muint_;  // \int_{x_l}^{y} mu
  std::vector<double> node_s_;
  std::vector<double> node_mu_;
  double mu_tail_ = 0.0;
  bool mu_tail_finite_ = true;
  double table_error_ = 0.0;
};

}  // namespace fpt::detail
