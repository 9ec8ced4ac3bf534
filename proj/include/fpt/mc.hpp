#pragma once

// Monte Carlo first-passage oracle.
//
// Two drivers share the statistics plumbing:
//
//   * simulate_fpt_1d: Euler-Maruyama paths of the averaged diffusion
//     dx = m dt + sigma dW on [x_l, xc], with reflection at the singular
//     left boundary, a Brownian-bridge test for barrier crossings that fall
//     between grid points, and linear sub-step interpolation of the
//     passage time;
//
//   * simulate_duffing_fpt: symplectic-Euler integration of the full
//     second-order oscillator
//        x' = y,
//        y' = -alpha1 x + alpha3 x^3 - eps (beta1 y + beta2 |y| y + beta3 y^3)
//             + sqrt(eps) (nu1 xi1(t) + nu2 x xi2(t)),
//     driven by stationary Gaussian excitations xi1, xi2 synthesized from
//     their spectra; passage when the energy H(x, y) first reaches H_c (or
//     the trajectory leaves the heteroclinic region). Times are reported in
//     the oscillator's own t units; the averaged model lives on the slow
//     time tau = eps * t, so compare eps * mean against its moments.
//
// Determinism: path i draws from counter-based stream i of the master seed,
// so results are bit-identical for a given seed regardless of thread count
// or path-count extensions.

#include <cstdint>
#include <string>
#include <vector>

#include "fpt/diffusion.hpp"
#include "fpt/noise.hpp"
#include "fpt/oscillators.hpp"

namespace fpt {

// First-passage sample statistics. Population-moment conventions, so that
// variance == second_moment - mean^2 holds exactly and the fields compare
// directly against the quadrature moments M1, M2. Paths that do not pass
// before t_cap are censored: they enter the estimates at t_cap (a lower
// bound that biases all moments downward), and `flagged` is set when the
// censored fraction reaches 0.1%, marking the run as untrusted.
struct FptStats {
  std::int64_t n_paths = 0;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  std::int64_t n_censored = 0;
  bool flagged = false;
};

struct McOptions {
  // 0 = hardware concurrency. The estimate is identical for every value.
  int n_threads = 1;
  // When non-null, receives the per-path passage times in path order.
  std::vector<double>* passage_times = nullptr;
  // Duffing driver only: start each path at a uniformly random phase on the
  // initial-energy orbit instead of exactly at (x0, y0). This matches the
  // averaged model's notion of "started at energy H0", which carries no
  // phase information.
  bool randomize_phase = false;
};

// Euler-Maruyama first-passage simulation of `model` from x0 to xc.
// Preconditions: x_l <= x0 <= xc <= model.x_c, dt > 0, t_cap > 0,
// n_paths >= 1. x0 == xc returns all-zero passage times. A start exactly on
// the left boundary is nudged to x_l + 1e-6 (xc - x_l): entrance-type
// moments are continuous there, while the coefficients themselves may not
// be evaluable at x_l.
FptStats simulate_fpt_1d(const DiffusionModel& model, double x0, double xc,
                         double dt, std::int64_t n_paths, double t_cap,
                         std::uint64_t seed, const McOptions& opts = {});

// Full-oscillator first-passage simulation: passage when H(x, y) first
// reaches H_c, started from (x0, y0) (default: the stable equilibrium).
// Preconditions: 0 < H_c < H_crit, (x0, y0) inside the heteroclinic region,
// dt > 0, t_cap > 0, n_paths >= 1. spec1 drives the additive channel nu1,
// spec2 the parametric channel nu2 x; a channel with zero intensity is
// skipped. Starting at or above H_c returns all-zero passage times.
FptStats simulate_duffing_fpt(const DuffingParams& p, const SpectrumSpec& spec1,
                              const SpectrumSpec& spec2, double H_c, double dt,
                              std::int64_t n_paths, double t_cap,
                              std::uint64_t seed, double x0 = 0.0,
                              double y0 = 0.0, const McOptions& opts = {});

// z-scores of the quadrature moments against the sample, pass/fail at 3
// standard errors. `pass` additionally requires an untrusted-censoring-free
// run (stats.flagged == false).
struct CompareReport {
  double z_mean = 0.0;
  double z_variance = 0.0;
  bool mean_ok = false;
  bool variance_ok = false;
  bool pass = false;
};
CompareReport compare_stats(double quadrature_M1, double quadrature_M2,
                            const FptStats& stats);

// Default step sizes: min(1e-3, 1e-3 (xc - x_l)^2 / max sigma^2) for the
// averaged diffusion (the max is scanned over (x_l, xc)); T(0)/200 =
// pi/(100 sqrt(alpha1)) for the full oscillator.
double default_dt_1d(const DiffusionModel& model, double xc);
double duffing_default_dt(const DuffingParams& p);

// Noise-free trajectory of the production symplectic-Euler stepper:
// H(x_i, y_i) for i = 0..n_steps. Integrator diagnostic (energy drift in
// the conservative limit) and phase-portrait plumbing.
std::vector<double> duffing_energy_trace(const DuffingParams& p, double x0,
                                         double y0, double dt,
                                         std::int64_t n_steps);

// Raw passage-time dump: one time per line, plain text.
void write_passage_times(const std::string& path,
                         const std::vector<double>& times);

}  // namespace fpt
