#include "fpt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fpt/errors.hpp"
#include "fpt/quadrature.hpp"
#include "fpt/rng.hpp"

namespace fpt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Harmonic-superposition bin count: equal-energy stratification keeps the
// synthesized path aperiodic (equal-width bins would repeat with period
// 2*pi/dbin) and puts resolution where the spectrum carries power.
constexpr std::size_t kNumHarmonics = 2048;

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

// Int_a^b (Sa + d*(w-a)) cos(w s) dw, h = b - a. Closed form when the phase
// span |s| h is large; a fixed Kronrod panel otherwise (the closed form loses
// ~|s|h relative digits to cancellation as s h -> 0, the panel is exact to
// machine precision for phase spans this small).
double cell_cosine_integral(double a, double b, double Sa, double Sb,
                            double s) {
  const double h = b - a;
  if (s == 0.0) return 0.5 * (Sa + Sb) * h;
  if (std::abs(s) * h <= 1.0) {
    const double d = (Sb - Sa) / h;
    return integrate_gk15_panel(
               [&](double w) { return (Sa + d * (w - a)) * std::cos(w * s); },
               a, b)
        .value;
  }
  const double d = (Sb - Sa) / h;
  const double sin_b = std::sin(b * s), sin_a = std::sin(a * s);
  const double cos_b = std::cos(b * s), cos_a = std::cos(a * s);
  return Sa * (sin_b - sin_a) / s +
         d * (h * sin_b / s + (cos_b - cos_a) / (s * s));
}

// One-sided energy G = 2 S integrated from omega[0] to each node (tabulated
// kind). Exact: the density is piecewise linear.
std::vector<double> node_energy(const SpectrumSpec& spec) {
  std::vector<double> c(spec.omega.size(), 0.0);
  for (std::size_t i = 0; i + 1 < spec.omega.size(); ++i) {
    const double h = spec.omega[i + 1] - spec.omega[i];
    c[i + 1] = c[i] + (spec.S[i] + spec.S[i + 1]) * h;  // 2 * trapezoid
  }
  return c;
}

// Frequency w with Int_0^w 2 S = target, for the exponential-cosine kind.
// The cumulative has the closed form (v/pi)[atan((w-c)/l) + atan((w+c)/l)]
// (+ v at the lower limit folded out); strictly increasing, so safeguarded
// Newton converges from anywhere.
double invert_energy_exp_cosine(const SpectrumSpec& spec, double target) {
  const double v = spec.variance, l = spec.decay, c = spec.center;
  const auto cdf = [&](double w) {
    return (v / kPi) * (std::atan((w - c) / l) + std::atan((w + c) / l));
  };
  double lo = 0.0, hi = std::max(1.0, c + l);
  while (cdf(hi) < target) hi *= 2.0;
  double w = c;
  for (int it = 0; it < 80; ++it) {
    const double f = cdf(w) - target;
    (f > 0.0 ? hi : lo) = w;
    const double g = 2.0 * spectrum_value(spec, w);
    double step = (g > 0.0) ? -f / g : 0.0;
    double next = w + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) < 1e-14 * (1.0 + std::abs(w))) return next;
    w = next;
  }
  return w;
}

// Same inversion for the tabulated kind: the cumulative is piecewise
// quadratic, solved per cell in the cancellation-free form.
double invert_energy_tabulated(const SpectrumSpec& spec,
                               const std::vector<double>& cum, double target) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), target);
  std::size_t i = (it == cum.begin()) ? 0 : (it - cum.begin() - 1);
  i = std::min(i, cum.size() - 2);
  const double a = spec.omega[i], b = spec.omega[i + 1];
  const double h = b - a;
  const double Sa = spec.S[i];
  const double d = (spec.S[i + 1] - Sa) / h;
  const double e = 0.5 * (target - cum[i]);  // Int_a^w S = e
  const double disc = Sa * Sa + 2.0 * d * e;
  const double denom = Sa + std::sqrt(std::max(disc, 0.0));
  if (denom <= 0.0) return 0.5 * (a + b);  // zero-power cell
  return std::min(b, a + 2.0 * e / denom);
}

}  // namespace

SpectrumSpec white_spectrum(double intensity) {
  require(std::isfinite(intensity) && intensity >= 0.0,
          "white spectrum intensity must be finite and >= 0");
  SpectrumSpec spec;
  spec.kind = SpectrumKind::White;
  spec.white_intensity = intensity;
  return spec;
}

SpectrumSpec tabulated_spectrum(std::vector<double> omega,
                                std::vector<double> S) {
  require(omega.size() == S.size(),
          "tabulated spectrum: omega and S lengths differ");
  require(omega.size() >= 2, "tabulated spectrum needs at least two nodes");
  require(std::isfinite(omega.front()) && omega.front() >= 0.0,
          "tabulated spectrum grid must start at omega >= 0");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    require(std::isfinite(omega[i]) && std::isfinite(S[i]) && S[i] >= 0.0,
            "tabulated spectrum values must be finite with S >= 0");
    if (i > 0)
      require(omega[i] > omega[i - 1],
              "tabulated spectrum grid must be strictly increasing");
  }
  SpectrumSpec spec;
  spec.kind = SpectrumKind::Tabulated;
  spec.omega = std::move(omega);
  spec.S = std::move(S);
  return spec;
}

SpectrumSpec exp_cosine_spectrum(double variance, double decay,
                                 double center) {
  require(std::isfinite(variance) && variance > 0.0,
          "exp-cosine spectrum: variance must be finite and > 0");
  require(std::isfinite(decay) && decay > 0.0,
          "exp-cosine spectrum: decay rate must be finite and > 0");
  require(std::isfinite(center) && center >= 0.0,
          "exp-cosine spectrum: center frequency must be finite and >= 0");
  SpectrumSpec spec;
  spec.kind = SpectrumKind::ExpCosine;
  spec.variance = variance;
  spec.decay = decay;
  spec.center = center;
  return spec;
}

SpectrumSpec load_spectrum_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spectrum table: " + path);
  std::vector<double> omega, S;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double w, s;
    if (!(row >> w)) continue;  // blank / comment-only line
    if (!(row >> s))
      throw ValidationError("spectrum table " + path + " line " +
                            std::to_string(line_no) +
                            ": expected two columns (omega, S)");
    double extra;
    if (row >> extra)
      throw ValidationError("spectrum table " + path + " line " +
                            std::to_string(line_no) +
                            ": more than two columns");
    omega.push_back(w);
    S.push_back(s);
  }
  return tabulated_spectrum(std::move(omega), std::move(S));
}

double spectrum_value(const SpectrumSpec& spec, double omega) {
  require(std::isfinite(omega), "spectrum_value: omega must be finite");
  switch (spec.kind) {
    case SpectrumKind::White:
      return spec.white_intensity;
    case SpectrumKind::ExpCosine: {
      const double l = spec.decay, c = spec.center;
      const double dm = omega - c, dp = omega + c;
      return spec.variance / (2.0 * kPi) *
             (l / (l * l + dm * dm) + l / (l * l + dp * dp));
    }
    case SpectrumKind::Tabulated: {
      const double w = std::abs(omega);
      if (w < spec.omega.front() || w > spec.omega.back()) return 0.0;
      const auto it =
          std::upper_bound(spec.omega.begin(), spec.omega.end(), w);
      if (it == spec.omega.end()) return spec.S.back();
      const std::size_t i = it - spec.omega.begin() - 1;
      const double t =
          (w - spec.omega[i]) / (spec.omega[i + 1] - spec.omega[i]);
      return spec.S[i] + t * (spec.S[i + 1] - spec.S[i]);
    }
  }
  throw NumericalError("spectrum_value: unknown spectrum kind");
}

double autocorrelation(const SpectrumSpec& spec, double s) {
  require(std::isfinite(s), "autocorrelation: lag must be finite");
  switch (spec.kind) {
    case SpectrumKind::White:
      throw ValidationError(
          "white noise has no pointwise autocorrelation (delta function); "
          "use the intensity directly");
    case SpectrumKind::ExpCosine:
      return spec.variance * std::exp(-spec.decay * std::abs(s)) *
             std::cos(spec.center * s);
    case SpectrumKind::Tabulated: {
      // R(s) = Int_{-inf}^{inf} S cos(omega s) = 2 Int_{grid} S cos(omega s)
      // by the even extension; exact per cell up to the closed form /
      // fixed-panel switch in cell_cosine_integral.
      double r = 0.0;
      for (std::size_t i = 0; i + 1 < spec.omega.size(); ++i)
        r += cell_cosine_integral(spec.omega[i], spec.omega[i + 1], spec.S[i],
                                  spec.S[i + 1], s);
      return 2.0 * r;
    }
  }
  throw NumericalError("autocorrelation: unknown spectrum kind");
}

double spectrum_variance(const SpectrumSpec& spec) {
  switch (spec.kind) {
    case SpectrumKind::White:
      throw ValidationError(
          "white noise has infinite variance; use the intensity directly");
    case SpectrumKind::ExpCosine:
      return spec.variance;
    case SpectrumKind::Tabulated:
      return node_energy(spec).back();
  }
  throw NumericalError("spectrum_variance: unknown spectrum kind");
}

namespace {

void validate_synthesis(const SpectrumSpec& spec, double dt) {
  require(spec.kind != SpectrumKind::White,
          "synthesize_realization: white noise is generated as increments by "
          "the Monte Carlo driver, not as a sampled path");
  require(std::isfinite(dt) && dt > 0.0,
          "synthesize_realization: dt must be finite and > 0");
}

// Equal-energy bin center frequencies (ascending), one per harmonic.
std::vector<double> harmonic_bin_frequencies(const SpectrumSpec& spec,
                                             double total) {
  std::vector<double> cum;
  if (spec.kind == SpectrumKind::Tabulated) cum = node_energy(spec);
  std::vector<double> w(kNumHarmonics);
  for (std::size_t k = 0; k < kNumHarmonics; ++k) {
    const double target = (k + 0.5) * total / kNumHarmonics;
    w[k] = (spec.kind == SpectrumKind::ExpCosine)
               ? invert_energy_exp_cosine(spec, target)
               : invert_energy_tabulated(spec, cum, target);
  }
  return w;
}

}  // namespace

std::vector<double> synthesize_realization(const SpectrumSpec& spec, double dt,
                                           std::size_t n, std::uint64_t seed) {
  require(n >= 2, "synthesize_realization: need at least two samples");
  // One shared rotator implementation: the batch form is the streaming form
  // run to length. (Textually duplicated loops are not reliably bit-equal:
  // the compiler may fuse an adjacent cos/sin pair into sincos at one site
  // only, and libm's sincos can differ from sin by an ulp.)
  HarmonicSynth synth(spec, dt, seed);
  std::vector<double> out(n);
  for (double& x : out) x = synth.next();
  return out;
}

HarmonicSynth::HarmonicSynth(const SpectrumSpec& spec, double dt,
                             std::uint64_t seed) {
  validate_synthesis(spec, dt);
  const double total = spectrum_variance(spec);
  if (total <= 0.0) return;  // zero-power spectrum: next() yields zeros

  const std::vector<double> freq = harmonic_bin_frequencies(spec, total);
  amp_ = std::sqrt(2.0 * total / kNumHarmonics);
  re_.resize(kNumHarmonics);
  im_.resize(kNumHarmonics);
  cd_.resize(kNumHarmonics);
  sd_.resize(kNumHarmonics);
  rng::Xoshiro256pp engine(seed);
  for (std::size_t k = 0; k < kNumHarmonics; ++k) {
    const double phase = 2.0 * kPi * engine.uniform();
    // Rotator recurrence for cos(freq[k] * i * dt + phase): one complex
    // multiply per harmonic per sample, renormalized periodically in next()
    // against amplitude drift.
    cd_[k] = std::cos(freq[k] * dt);
    sd_[k] = std::sin(freq[k] * dt);
    re_[k] = std::cos(phase);
    im_[k] = std::sin(phase);
  }
}

double HarmonicSynth::next() {
  if (re_.empty()) return 0.0;
  double value = 0.0;
  // Same per-harmonic operation order as the batch loop (accumulate, rotate,
  // renormalize every 1024th sample), so the streams agree bit for bit.
  const bool renorm = (i_ & 1023u) == 1023u;
  for (std::size_t k = 0; k < re_.size(); ++k) {
    value += amp_ * re_[k];
    const double re_next = re_[k] * cd_[k] - im_[k] * sd_[k];
    im_[k] = re_[k] * sd_[k] + im_[k] * cd_[k];
    re_[k] = re_next;
    if (renorm) {
      const double norm = 1.0 / std::hypot(re_[k], im_[k]);
      re_[k] *= norm;
      im_[k] *= norm;
    }
  }
  ++i_;
  return value;
}

}  // namespace fpt
