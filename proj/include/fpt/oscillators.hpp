#pragma once

// Averaged one-dimensional diffusion models for three randomly excited
// oscillator families:
//
//   * a linear oscillator reduced to its normalized amplitude r(t)
//     ("r-process"): dr = eps*d*omega_n (1/(2r) - r) dt + sqrt(eps*d*omega_n) dW;
//   * a Mathieu-type oscillator with additive + parametric excitation,
//     averaged either over total energy H or over oscillation amplitude b;
//   * a softening Duffing oscillator averaged over total energy H, under
//     white or colored (finite-correlation-time) excitation, with all
//     elliptic-integral coefficient formulas.
//
// All models carry their singular boundary at the left domain end and are
// consumed by the boundary-classification and first-passage machinery.

#include <functional>

#include "fpt/diffusion.hpp"

namespace fpt {

// ---------------------------------------------------------------------------
// Linear oscillator (normalized amplitude process)

struct LinearOscParams {
  double d;         // damping ratio, > 0
  double omega_n;   // undamped natural frequency, > 0
  double eps;       // perturbation scale, > 0
  double spectrum_at_omega_n;  // S_xi_xi(omega_n) >= 0, two-sided convention
};

// Physical amplitude a = linear_amplitude_scale(p) * r.
double linear_amplitude_scale(const LinearOscParams& p);

// Model for r on (0, radius_cap]; left boundary at 0 is entrance.
DiffusionModel linear_amplitude_model(const LinearOscParams& p,
                                      double radius_cap = 10.0);

// ---------------------------------------------------------------------------
// Mathieu-type oscillator (additive + parametric excitation)

struct MathieuParams {
  double alpha1;  // linear stiffness, > 0
  double beta1;   // linear damping, >= 0
  double nu1;     // additive noise intensity, >= 0
  double nu2;     // parametric noise intensity, >= 0 (nu1 or nu2 positive)
  double eps;     // perturbation scale, > 0
  double S11_at_sqrt_alpha1;    // S_xi1xi1(sqrt(alpha1)) >= 0
  double S22_at_2sqrt_alpha1;   // S_xi2xi2(2 sqrt(alpha1)) >= 0
};

// Energy-averaged model on [0, energy_cap]:
//   m(H)      = -beta1 H + pi nu1^2 S11 + (pi nu2^2 S22 / alpha1) H,
//   sigma2(H) = 2 pi nu1^2 S11 H + (pi nu2^2 S22 / alpha1) H^2.
// energy_cap = 0 selects the default 20 * alpha1.
DiffusionModel mathieu_energy_model(const MathieuParams& p,
                                    double energy_cap = 0.0);

// Amplitude-averaged model on (0, amplitude_cap]:
//   m_A(b)      = -(beta1/2) b + (pi/(2 alpha1)) nu1^2 S11 / b
//                 + (3 pi/(8 alpha1)) nu2^2 S22 b,
//   sigma_A2(b) = (pi/alpha1) nu1^2 S11 + (pi/(4 alpha1)) nu2^2 S22 b^2.
// amplitude_cap = 0 selects sqrt(2 * 20 * alpha1 / alpha1) = sqrt(40), the
// amplitude matching the default energy cap under H = alpha1 b^2 / 2.
DiffusionModel ariaratnam_amplitude_model(const MathieuParams& p,
                                          double amplitude_cap = 0.0);

// Pushes a normalized energy density through H = alpha1 b^2 / 2:
// returns b |-> density_H(alpha1 b^2 / 2) * sqrt(2 alpha1 H). Preserves
// normalization exactly (change of variables).
std::function<double(double)> amplitude_density_from_energy(
    std::function<double(double)> density_H, double alpha1);

// ---------------------------------------------------------------------------
// Softening Duffing oscillator

struct DuffingParams {
  double alpha1;  // linear stiffness, > 0
  double alpha3;  // softening cubic stiffness, > 0
  double beta1;   // linear damping, >= 0
  double beta2;   // quadratic damping, >= 0
  double beta3;   // cubic damping, >= 0
  double nu1;     // additive noise intensity, >= 0
  double nu2;     // parametric noise intensity, >= 0
  double eps;     // perturbation scale, > 0

  // Heteroclinic (critical) energy: oscillatory orbits exist on [0, H_crit).
  double H_crit() const { return alpha1 * alpha1 / (4.0 * alpha3); }
  // Saddle-point abscissa: the heteroclinic orbit connects (+-b_hetero, 0).
  double b_hetero() const;
};

// H(x, y) = y^2/2 + alpha1 x^2/2 - alpha3 x^4/4.
double duffing_hamiltonian(double x, double y, const DuffingParams& p);

// True when (x, y) lies inside the heteroclinic loop (bounded oscillations):
// H(x,y) < H_crit and |x| < b_hetero.
bool inside_heteroclinic_region(double x, double y, const DuffingParams& p);

// Orbit geometry at energy H in [0, H_crit): oscillation amplitude b,
// auxiliary amplitude a, elliptic frequency q, modulus k = b/a, period
// T = 4 K(k)/q. The orbit is x(t) = b sn(qt, k), y = b q cn dn.
struct DuffingGeometry {
  double b;
  double a;
  double q;
  double k;
  double T;
};
DuffingGeometry duffing_geometry(double H, const DuffingParams& p);

// Kinetic-energy expression Q(x, H) = y^2 = 2H - alpha1 x^2 + alpha3 x^4/2.
double duffing_Q(double x, double H, const DuffingParams& p);

// Period average (1/T) Int_0^T Q(x(t),H) (-beta1 - beta2 sqrt(Q) - beta3 Q) dt
// over the unperturbed orbit. This is the full damping contribution to the
// averaged drift, including the quadratic beta2 |y| y term that has no
// elliptic closed form.
double duffing_damping_average(double H, const DuffingParams& p);

// Energy-averaged model under white excitation, from the closed-form
// elliptic-integral coefficients (beta2 enters only through
// duffing_damping_average, used by the colored path):
//   m(H) = B(H) + C(H), sigma2(H) = nu1^2 B1(H) + nu2^2 B2(H).
// Domain [0, (1 - 1e-6) H_crit]; the guard band keeps the diverging period
// T(H) away from the heteroclinic energy.
DiffusionModel duffing_white_model(const DuffingParams& p);

// Energy-averaged drift and squared diffusion under stationary colored
// excitation with autocorrelations R1 (additive channel) and R2 (parametric
// channel). Both maps must decay: |R_i(s)| < 1e-6 R_i(0) within 200
// oscillation periods, or NumericalError is thrown.
struct DriftDiffusion {
  double m;
  double sigma_sq;
};
using AutocorrFn = std::function<double(double)>;
DriftDiffusion duffing_colored_coefficients(const DuffingParams& p,
                                            const AutocorrFn& R1,
                                            const AutocorrFn& R2, double H);

// Full colored-excitation model: coefficients tabulated over a
// boundary-refined H-grid on [0, (1 - 1e-6) H_crit] with shape-preserving
// cubic interpolation (construction cost is paid once here).
DiffusionModel duffing_colored_model(const DuffingParams& p,
                                     const AutocorrFn& R1,
                                     const AutocorrFn& R2);

namespace detail {

// Closed-form elliptic coefficient terms of the white-excitation drift and
// diffusion (exposed for direct unit verification):
//   B(H) = -(beta1 + 2 beta3 H) B1 + alpha1 beta3 B2 - (alpha3 beta3 / 2) B3,
//   C(H) = nu1^2/2 - (nu2^2 a^2 / 2)(E/K - 1).
struct DuffingWhiteTerms {
  double B1;
  double B2;
  double B3;
  double C;
};
DuffingWhiteTerms duffing_white_terms(double H, const DuffingParams& p);

// Inner orbit-integral kernels of the colored-noise coefficients at energy H
// and phase shift w = q s (exposed for quadrature cross-checks):
//   P1(w) = Int_{-K}^{K} cn(u+w) dn(u+w) / (cn u dn u) du   [principal value]
//   P2(w) = Int_{-K}^{K} sn u sn(u+w) cn(u+w) dn(u+w) / (cn u dn u) du
//   Q1(w) = even part in w of 2 Int_0^{K} cn dn cn(u+w) dn(u+w) du
//   Q2(w) = even part in w of 2 Int_0^{K} sn sn(u+w) cn dn cn(u+w) dn(u+w) du
// (only the even parts survive pairing with an even autocorrelation).
struct DuffingColoredKernels {
  double P1;
  double P2;
  double Q1;
  double Q2;
};
DuffingColoredKernels duffing_colored_kernels(double H, const DuffingParams& p,
                                              double w);

}  // namespace detail

}  // namespace fpt
