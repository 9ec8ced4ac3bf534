#include "fpt/detail/scale_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fpt/errors.hpp"
#include "fpt/quadrature.hpp"

namespace fpt::detail {

namespace {

// Beyond this magnitude of the scale exponent, s or mu would leave the range
// where their products stay well-conditioned in double precision; the grid
// is truncated there and the residual left tail handled by extrapolation.
constexpr double kPhiCutoff = 600.0;

// Ascending node grid on [x_l + L 2^{-J}, xc]: dyadic octaves (halving
// widths) below x_l + L/8 with `p` points each, then a uniform region with
// 6p points. Clusters geometrically toward the singular left endpoint while
// keeping the outer region densely resolved.
std::vector<double> build_grid(double x_l, double xc, int J, int p) {
  const double L = xc - x_l;
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>((J - 3) * p + 6 * p + 1));
  nodes.push_back(x_l + std::ldexp(L, -J));
  for (int j = J - 1; j >= 3; --j) {
    const double a = x_l + std::ldexp(L, -(j + 1));
    const double b = x_l + std::ldexp(L, -j);
    for (int i = 1; i <= p; ++i)
      nodes.push_back(a + (b - a) * static_cast<double>(i) / p);
  }
  const double a = x_l + L / 8.0;
  const int n_uniform = 6 * p;
  for (int i = 1; i <= n_uniform; ++i)
    nodes.push_back(a + (xc - a) * static_cast<double>(i) / n_uniform);
  nodes.back() = xc;  // exactly
  return nodes;
}

// Cubic Hermite value on a single cell.
double hermite_cell(double x, double x0, double x1, double f0, double f1,
                    double d0, double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

}  // namespace

ScaleTables::ScaleTables(const DiffusionModel& model, double xc,
                         const TableOptions& opt) {
  if (!(xc > model.x_l) || !(xc <= model.x_c))
    throw ValidationError("ScaleTables: xc must lie in (x_l, x_c]");
  x_l_ = model.x_l;
  xc_ = xc;
  sigma_sq_ = model.diffusion_sq;

  const int J = std::max(opt.max_octaves, 4);
  const int p = std::max(opt.per_octave, 2);
  std::vector<double> x = build_grid(x_l_, xc_, J, p);
  std::size_t n = x.size();

  const RealFn drift_over_sig2 = [&model](double y) {
    const double s2 = model.diffusion_sq(y);
    if (!(s2 > 0.0))
      throw NumericalError("diffusion_sq must be positive on the interior");
    return model.drift(y) / s2;
  };

  // Scale exponent phi at the nodes, accumulated cell by cell from the
  // anchor node (the one nearest to x_ref, clamped into the grid).
  std::size_t anchor =
      std::lower_bound(x.begin(), x.end(), model.x_ref) - x.begin();
  if (anchor >= n) anchor = n - 1;

  std::vector<double> phi(n, 0.0);
  double phi_err = 0.0;
  for (std::size_t i = anchor; i + 1 < n; ++i) {
    const QuadResult q = integrate_gk(drift_over_sig2, x[i], x[i + 1],
                                      opt.rel_tol, 10);
    phi[i + 1] = phi[i] - 2.0 * q.value;
    phi_err += 2.0 * q.error;
    if (std::abs(phi[i + 1]) > kPhiCutoff + 100.0)
      throw NumericalError("scale exponent overflows toward the right end");
  }
  std::size_t first = 0;  // innermost node kept
  for (std::size_t i = anchor; i > 0; --i) {
    const QuadResult q = integrate_gk(drift_over_sig2, x[i - 1], x[i],
                                      opt.rel_tol, 10);
    phi[i - 1] = phi[i] + 2.0 * q.value;
    phi_err += 2.0 * q.error;
    if (std::abs(phi[i - 1]) > kPhiCutoff) {
      first = i - 1;  // keep this node as the new innermost
      break;
    }
  }
  if (first > 0) {
    x.erase(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(first));
    phi.erase(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(first));
    n = x.size();
  }

  // Exact slopes phi' = -2 m / sigma^2, and pointwise s, mu at the nodes.
  std::vector<double> dphi(n);
  node_s_.resize(n);
  node_mu_.resize(n);
  std::vector<double> sig2(n);
  for (std::size_t i = 0; i < n; ++i) {
    sig2[i] = model.diffusion_sq(x[i]);
    if (!(sig2[i] > 0.0))
      throw NumericalError("diffusion_sq must be positive on the interior");
    dphi[i] = -2.0 * model.drift(x[i]) / sig2[i];
    node_s_[i] = std::exp(phi[i]);
    node_mu_[i] = std::exp(-phi[i]) / sig2[i];
  }

  // Per-cell integrals of s and mu, evaluated on the Hermite representation
  // of phi (one 15-point panel per cell; the grid already resolves every
  // scale of variation, so panels are effectively exact).
  std::vector<double> cell_s(n - 1), cell_mu(n - 1);
  double cell_err = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = x[i], x1 = x[i + 1];
    const double f0 = phi[i], f1 = phi[i + 1];
    const double d0 = dphi[i], d1 = dphi[i + 1];
    const auto phi_hat = [&](double y) {
      return hermite_cell(y, x0, x1, f0, f1, d0, d1);
    };
    const QuadResult qs = integrate_gk15_panel(
        [&](double y) { return std::exp(phi_hat(y)); }, x0, x1);
    const QuadResult qm = integrate_gk15_panel(
        [&](double y) { return std::exp(-phi_hat(y)) / model.diffusion_sq(y); },
        x0, x1);
    cell_s[i] = qs.value;
    cell_mu[i] = qm.value;
    cell_err += qs.error + qm.error;
  }

  // Left tail of the speed measure below the innermost node: extrapolate
  // from the per-octave sums when they decay geometrically, otherwise fall
  // back to the direct improper integral.
  double tail = 0.0;
  double tail_err = 0.0;
  bool tail_ok = true;
  const bool truncated = (first > 0);
  {
    // Octave sums: cells [0, p) are the innermost octave only when the grid
    // was not truncated; after truncation the octave structure is unknown,
    // so go straight to the fallback.
    double d_in = 0.0, d_mid = 0.0, d_out = 0.0;
    const std::size_t np = static_cast<std::size_t>(p);
    const bool have_octaves = !truncated && n > 3 * np;
    if (have_octaves) {
      for (std::size_t i = 0; i < np; ++i) d_in += cell_mu[i];
      for (std::size_t i = np; i < 2 * np; ++i) d_mid += cell_mu[i];
      for (std::size_t i = 2 * np; i < 3 * np; ++i) d_out += cell_mu[i];
    }
    const double r = (have_octaves && d_mid > 0.0) ? d_in / d_mid : 1.0;
    const double r2 = (have_octaves && d_out > 0.0) ? d_mid / d_out : 1.0;
    if (have_octaves && r > 0.0 && r < 0.95) {
      tail = d_in * r / (1.0 - r);
      tail_err = tail * std::min(1.0, std::max(0.05, std::abs(r - r2) /
                                                         (1.0 - r)));
    } else {
      // Direct improper integral of mu below the innermost node, with the
      // exponent accumulated from the innermost node's value.
      const double x_in = x[0];
      const double phi_in = phi[0];
      // Deep adaptive depth: the exponent integrand may carry an endpoint
      // singularity that needs bisection down to the (tiny) evaluation point.
      const RealFn mu_direct = [&](double y) {
        const QuadResult q = integrate_gk(drift_over_sig2, x_in, y, 1e-9, 60);
        const double e = phi_in - 2.0 * q.value;
        return std::exp(-e) / model.diffusion_sq(y);
      };
      const ImproperResult ir =
          integrate_improper_left(mu_direct, x_l_, x_in, 1e-8);
      if (ir.tag == Divergence::Finite) {
        tail = ir.value;
        tail_err = ir.error;
      } else {
        tail_ok = false;
      }
    }
  }
  mu_tail_ = tail;
  mu_tail_finite_ = tail_ok;

  // Cumulatives. SInt decreases from the right end (SInt(xc) = 0); SLInt
  // and MuInt increase from the innermost node; MuInt starts at the tail.
  std::vector<double> sint(n, 0.0), slint(n, 0.0), muint(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) sint[i - 1] = sint[i] + cell_s[i - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) slint[i + 1] = slint[i] + cell_s[i];
  muint[0] = tail;
  for (std::size_t i = 0; i + 1 < n; ++i) muint[i + 1] = muint[i] + cell_mu[i];

  std::vector<double> neg_s(n), pos_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    neg_s[i] = -node_s_[i];
    pos_s[i] = node_s_[i];
  }
  phi_ = HermiteTable(x, phi, dphi);
  sint_ = HermiteTable(x, std::move(sint), std::move(neg_s));
  slint_ = HermiteTable(x, std::move(slint), std::move(pos_s));
  muint_ = HermiteTable(x, std::move(muint), node_mu_);

  table_error_ = phi_err + cell_err + tail_err;
}

double ScaleTables::s(double y) const { return std::exp(phi_(y)); }

double ScaleTables::mu(double y) const {
  return std::exp(-phi_(y)) / sigma_sq_(y);
}

double ScaleTables::integrate_cell(std::size_t i, const RealFn& f,
                                   double* err_acc) const {
  const std::vector<double>& x = phi_.nodes();
  const QuadResult q = integrate_gk15_panel(f, x[i], x[i + 1]);
  if (err_acc) *err_acc += q.error;
  return q.value;
}

}  // namespace fpt::detail
