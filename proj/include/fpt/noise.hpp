#pragma once

// Stationary Gaussian excitation: spectral densities, autocorrelations, and
// sample-path synthesis.
//
// Convention (fixed throughout the library): the two-sided spectral density
// S(omega) is the forward transform of the autocorrelation with the 1/(2*pi)
// factor,
//
//   S(omega) = (1/2pi) Int R(s) e^{i omega s} ds,
//   R(s)     =         Int S(omega) e^{-i omega s} domega,
//
// so R(0) = Int S = process variance. All averaged-oscillator coefficients
// consume S values directly in this convention.
//
// Tabulated spectra are supplied on an omega >= 0 grid and represent the
// even two-sided density: S(-omega) = S(omega), with S = 0 outside the
// tabulated range (zero extension). Values between nodes interpolate
// linearly.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fpt {

enum class SpectrumKind { White, Tabulated, ExpCosine };

// One excitation spectrum. Use the factory functions below; fields not
// relevant to `kind` are left zero/empty.
struct SpectrumSpec {
  SpectrumKind kind = SpectrumKind::White;

  // White: S(omega) = white_intensity for all omega.
  double white_intensity = 0.0;

  // Tabulated: nodes (strictly increasing, omega[0] >= 0) and values >= 0.
  std::vector<double> omega;
  std::vector<double> S;

  // Parametric exponential-cosine family: the spectrum whose autocorrelation
  // is R(s) = variance * exp(-decay*|s|) * cos(center*s); S(omega) is the
  // matching Lorentzian pair centred at +-center.
  double variance = 0.0;
  double decay = 0.0;
  double center = 0.0;
};

// Factories (validate and fill a SpectrumSpec).
SpectrumSpec white_spectrum(double intensity);
SpectrumSpec tabulated_spectrum(std::vector<double> omega,
                                std::vector<double> S);
SpectrumSpec exp_cosine_spectrum(double variance, double decay, double center);

// Reads a two-column (omega, S) plain-text table; '#' starts a comment.
// Units: omega in rad/time, S in state^2 * time.
SpectrumSpec load_spectrum_table(const std::string& path);

// S(omega). Even in omega; tabulated kind interpolates linearly and is zero
// beyond the grid.
double spectrum_value(const SpectrumSpec& spec, double omega);

// R(s) = Int S(omega) cos(omega s) domega. Even in s; R(0) is the variance.
// The white kind has no pointwise autocorrelation (delta function) and is
// rejected with ValidationError.
double autocorrelation(const SpectrumSpec& spec, double s);

// Total power Int S domega (= R(0)). Exact for the tabulated kind
// (trapezoid on a piecewise-linear density is exact).
double spectrum_variance(const SpectrumSpec& spec);

// Stationary zero-mean Gaussian realization x(i*dt), i = 0..n-1, by harmonic
// superposition: 2048 equal-energy frequency bins (inverse-CDF stratification
// of the one-sided density) with independent uniform phases drawn from
// `seed`. Deterministic given (spec, dt, n, seed). The white kind is
// rejected (white paths are generated as increments by the Monte Carlo
// driver directly).
std::vector<double> synthesize_realization(const SpectrumSpec& spec, double dt,
                                           std::size_t n, std::uint64_t seed);

// Streaming form of synthesize_realization: next() returns the sample at
// i*dt and advances i. Produces bit-identical values to the batch call with
// the same (spec, dt, seed) — same frequency bins, phase draws, rotator
// recurrences, and renormalization cadence — but needs no length up front,
// so a consumer that stops early (a passage-time path) pays only for the
// samples it actually uses.
class HarmonicSynth {
 public:
  HarmonicSynth(const SpectrumSpec& spec, double dt, std::uint64_t seed);
  double next();

 private:
  std::vector<double> re_, im_, cd_, sd_;
  double amp_ = 0.0;
  std::uint64_t i_ = 0;
};

}  // namespace fpt
