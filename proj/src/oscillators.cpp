#include "fpt/oscillators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fpt/errors.hpp"
#include "fpt/interp.hpp"
#include "fpt/quadrature.hpp"
#include "fpt/specfun.hpp"

namespace fpt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Energy-domain models stop short of the heteroclinic level, where the
// orbit period (and the averaging premise) diverges.
constexpr double kCritGuard = 1e-6;

// Colored-noise truncation policy: integrate lags until both kernels have
// decayed below kDecayTol of their lag-0 value, give up after kMaxPeriods
// oscillation periods.
constexpr double kDecayTol = 1e-6;
constexpr double kMaxPeriods = 200.0;

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

void validate(const LinearOscParams& p) {
  require(std::isfinite(p.d) && p.d > 0.0, "linear oscillator: d must be > 0");
  require(std::isfinite(p.omega_n) && p.omega_n > 0.0,
          "linear oscillator: omega_n must be > 0");
  require(std::isfinite(p.eps) && p.eps > 0.0,
          "linear oscillator: eps must be > 0");
  require(std::isfinite(p.spectrum_at_omega_n) && p.spectrum_at_omega_n >= 0.0,
          "linear oscillator: spectrum value must be >= 0");
}

void validate(const MathieuParams& p) {
  require(std::isfinite(p.alpha1) && p.alpha1 > 0.0,
          "mathieu params: alpha1 must be > 0");
  require(std::isfinite(p.beta1) && p.beta1 >= 0.0,
          "mathieu params: beta1 must be >= 0");
  require(std::isfinite(p.nu1) && p.nu1 >= 0.0 && std::isfinite(p.nu2) &&
              p.nu2 >= 0.0,
          "mathieu params: noise intensities must be >= 0");
  require(p.nu1 > 0.0 || p.nu2 > 0.0,
          "mathieu params: at least one of nu1, nu2 must be positive");
  require(std::isfinite(p.eps) && p.eps > 0.0,
          "mathieu params: eps must be > 0");
  require(std::isfinite(p.S11_at_sqrt_alpha1) && p.S11_at_sqrt_alpha1 >= 0.0 &&
              std::isfinite(p.S22_at_2sqrt_alpha1) &&
              p.S22_at_2sqrt_alpha1 >= 0.0,
          "mathieu params: spectrum values must be >= 0");
}

void validate(const DuffingParams& p) {
  require(std::isfinite(p.alpha1) && p.alpha1 > 0.0 &&
              std::isfinite(p.alpha3) && p.alpha3 > 0.0,
          "duffing params: alpha1 and alpha3 must be > 0");
  require(std::isfinite(p.beta1) && p.beta1 >= 0.0 &&
              std::isfinite(p.beta2) && p.beta2 >= 0.0 &&
              std::isfinite(p.beta3) && p.beta3 >= 0.0,
          "duffing params: damping coefficients must be >= 0");
  require(std::isfinite(p.nu1) && p.nu1 >= 0.0 && std::isfinite(p.nu2) &&
              p.nu2 >= 0.0,
          "duffing params: noise intensities must be >= 0");
  require(std::isfinite(p.eps) && p.eps > 0.0,
          "duffing params: eps must be > 0");
}

// ---------------------------------------------------------------------------
// Colored-excitation kernels.
//
// With the addition theorems, every inner integrand splits into parts even
// and odd in u. The odd parts carry the whole cn dn denominator and vanish
// over the symmetric range in the principal-value sense; what remains is
// smooth (the common denominator D = 1 - k^2 sn^2(u) sn^2(w) is bounded below
// by 1 - k^2 > 0), so plain Gauss panels converge fast. Writing
//   e = 1 + k^2 sn_u^2 sn_w^2,      D = 1 - k^2 sn_u^2 sn_w^2,
//   bracket = cn_w^2 dn_w^2 e - sn_w^2 (k^2 cn_u^2 cn_w^2 + dn_u^2 dn_w^2),
// the surviving kernels are
//   P1 = 2 cn_w dn_w Int_0^K e / D^2 du,
//   P2 = 2 Int_0^K sn_u^2 bracket / D^3 du,
//   Q1 = 2 cn_w dn_w Int_0^K cn_u^2 dn_u^2 e / D^2 du,
//   Q2 = 2 Int_0^K cn_u^2 dn_u^2 sn_u^2 bracket / D^3 du,
// where Q1, Q2 are the in-w even parts that survive pairing with an even
// autocorrelation. Their white-noise limits reproduce the closed-form
// C(H) and sigma^2(H) elliptic terms exactly.

using GaussRule = boost::math::quadrature::gauss<double, 30>;

// Jacobi data at composite Gauss nodes over u in [0, K], `panels` panels.
struct OrbitTables {
  double k2 = 0.0;
  double K = 0.0;
  std::vector<double> weight;
  std::vector<double> sn2, cn2, dn2, A2;  // A2 = cn^2 dn^2
};

OrbitTables build_orbit_tables(double k, double K, int panels) {
  OrbitTables t;
  t.k2 = k * k;
  t.K = K;
  const auto& xs = GaussRule::abscissa();  // positive half, even count
  const auto& ws = GaussRule::weights();
  const double h = K / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (int sign : {-1, 1}) {
        const double u = mid + sign * 0.5 * h * xs[j];
        const JacobiTriple jt = jacobi_elliptic(u, k);
        t.weight.push_back(0.5 * h * ws[j]);
        t.sn2.push_back(jt.sn * jt.sn);
        t.cn2.push_back(jt.cn * jt.cn);
        t.dn2.push_back(jt.dn * jt.dn);
        t.A2.push_back(jt.cn * jt.cn * jt.dn * jt.dn);
      }
    }
  }
  return t;
}

detail::DuffingColoredKernels eval_kernels(const OrbitTables& t,
                                           const JacobiTriple& jw) {
  const double sn2w = jw.sn * jw.sn;
  const double cn2w = jw.cn * jw.cn;
  const double dn2w = jw.dn * jw.dn;
  const double cw_dw = jw.cn * jw.dn;
  double s_e = 0.0, s_br = 0.0, s_A2e = 0.0, s_A2br = 0.0;
  for (std::size_t i = 0; i < t.weight.size(); ++i) {
    const double x = t.k2 * t.sn2[i] * sn2w;
    const double D = 1.0 - x;
    const double e = 1.0 + x;
    const double inv_D2 = 1.0 / (D * D);
    const double bracket =
        cn2w * dn2w * e - sn2w * (t.k2 * t.cn2[i] * cn2w + t.dn2[i] * dn2w);
    const double w_eD2 = t.weight[i] * e * inv_D2;
    const double w_brD3 = t.weight[i] * bracket * inv_D2 / D;
    s_e += w_eD2;
    s_A2e += t.A2[i] * w_eD2;
    s_br += t.sn2[i] * w_brD3;
    s_A2br += t.A2[i] * t.sn2[i] * w_brD3;
  }
  detail::DuffingColoredKernels out;
  out.P1 = 2.0 * cw_dw * s_e;
  out.P2 = 2.0 * s_br;
  out.Q1 = 2.0 * cw_dw * s_A2e;
  out.Q2 = 2.0 * s_A2br;
  return out;
}

// Lag horizon: the smallest scan point after which every active channel
// stays below kDecayTol of its lag-0 value; NumericalError if that never
// happens within kMaxPeriods orbit periods.
double decay_horizon(const AutocorrFn& R1, const AutocorrFn& R2, double R10,
                     double R20, double T) {
  const double step = T / 64.0;
  const long n_scan = std::lround(kMaxPeriods * 64.0);
  long last_exceed = -1;
  for (long j = 1; j <= n_scan; ++j) {
    const double s = j * step;
    const bool loud1 = R10 > 0.0 && std::abs(R1(s)) >= kDecayTol * R10;
    const bool loud2 = R20 > 0.0 && std::abs(R2(s)) >= kDecayTol * R20;
    if (loud1 || loud2) last_exceed = j;
  }
  if (last_exceed >= n_scan - 64)
    throw NumericalError(
        "colored excitation: autocorrelation does not decay below 1e-6 of "
        "its lag-0 value within 200 oscillation periods");
  return (last_exceed + 2) * step;
}

struct ColoredIntegrals {
  double drift;  // Int_0^{s_max} [nu1^2 R1 P1 + b^2 nu2^2 R2 P2] ds
  double sigma;  // Int_0^{s_max} [nu1^2 R1 Q1 + b^2 nu2^2 R2 Q2] ds
};

ColoredIntegrals sweep_lags(const DuffingParams& p, const AutocorrFn& R1,
                            const AutocorrFn& R2, bool use1, bool use2,
                            const DuffingGeometry& g, const OrbitTables& t,
                            double s_max, double panel_width) {
  using SRule = boost::math::quadrature::gauss<double, 15>;
  const auto& xs = SRule::abscissa();  // xs[0] = 0 (odd rule), then positive
  const auto& ws = SRule::weights();
  const double period4K = 4.0 * t.K;
  const int n_panels = std::max(1, (int)std::ceil(s_max / panel_width));
  const double h = s_max / n_panels;
  ColoredIntegrals acc{0.0, 0.0};
  const double b2 = g.b * g.b;
  for (int pn = 0; pn < n_panels; ++pn) {
    const double mid = (pn + 0.5) * h;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (int sign = (j == 0 ? 1 : -1); sign <= 1; sign += 2) {
        const double s = mid + sign * 0.5 * h * xs[j];
        const double wq = 0.5 * h * ws[j];
        double w = std::fmod(g.q * s, period4K);
        const auto kr = eval_kernels(t, jacobi_elliptic(w, g.k));
        const double r1 = use1 ? p.nu1 * p.nu1 * R1(s) : 0.0;
        const double r2 = use2 ? b2 * p.nu2 * p.nu2 * R2(s) : 0.0;
        acc.drift += wq * (r1 * kr.P1 + r2 * kr.P2);
        acc.sigma += wq * (r1 * kr.Q1 + r2 * kr.Q2);
        if (j == 0) break;  // center node of the odd rule appears once
      }
    }
  }
  return acc;
}

DriftDiffusion colored_coefficients_impl(const DuffingParams& p,
                                         const AutocorrFn& R1,
                                         const AutocorrFn& R2, double H) {
  const DuffingGeometry g = duffing_geometry(H, p);
  const double damping = duffing_damping_average(H, p);

  const double R10 = (p.nu1 > 0.0 && R1) ? R1(0.0) : 0.0;
  const double R20 = (p.nu2 > 0.0 && R2) ? R2(0.0) : 0.0;
  require(R10 >= 0.0 && R20 >= 0.0,
          "colored excitation: autocorrelation at lag 0 must be >= 0");
  const bool use1 = R10 > 0.0;
  const bool use2 = R20 > 0.0 && g.b > 0.0;
  if (!use1 && !use2) return {damping, 0.0};

  const double s_max = decay_horizon(R1, R2, use1 ? R10 : 0.0,
                                     use2 ? R20 : 0.0, g.T);

  // Refine the orbit quadrature (panel doubling, 1e-7 relative target), then
  // the lag panels (halving, 1e-6), starting from 2x30 orbit nodes and T/8
  // lag panels.
  int panels = 2;
  double panel_width = std::min(g.T / 8.0, 0.25 * s_max);
  OrbitTables tables = build_orbit_tables(g.k, 0.25 * g.q * g.T, panels);
  ColoredIntegrals cur =
      sweep_lags(p, R1, R2, use1, use2, g, tables, s_max, panel_width);
  for (int level = 0; level < 6; ++level) {
    panels *= 2;
    tables = build_orbit_tables(g.k, 0.25 * g.q * g.T, panels);
    const ColoredIntegrals fine =
        sweep_lags(p, R1, R2, use1, use2, g, tables, s_max, panel_width);
    const double rel =
        std::max(std::abs(fine.drift - cur.drift) /
                     (std::abs(fine.drift) + 1e-300),
                 std::abs(fine.sigma - cur.sigma) /
                     (std::abs(fine.sigma) + 1e-300));
    cur = fine;
    if (rel < 1e-7) break;
  }
  for (int level = 0; level < 8; ++level) {
    const ColoredIntegrals fine = sweep_lags(p, R1, R2, use1, use2, g, tables,
                                             s_max, panel_width * 0.5);
    const double rel =
        std::max(std::abs(fine.drift - cur.drift) /
                     (std::abs(fine.drift) + 1e-300),
                 std::abs(fine.sigma - cur.sigma) /
                     (std::abs(fine.sigma) + 1e-300));
    cur = fine;
    panel_width *= 0.5;
    if (rel < 1e-6) break;
  }

  const double b2 = g.b * g.b;
  DriftDiffusion out;
  out.m = (2.0 / (g.T * g.q)) * cur.drift + damping;
  out.sigma_sq = (4.0 * b2 * g.q / g.T) * cur.sigma;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear oscillator

double linear_amplitude_scale(const LinearOscParams& p) {
  validate(p);
  return std::sqrt(0.5 * p.d * std::pow(p.omega_n, 3) * p.spectrum_at_omega_n);
}

DiffusionModel linear_amplitude_model(const LinearOscParams& p,
                                      double radius_cap) {
  validate(p);
  require(std::isfinite(radius_cap) && radius_cap > 0.0,
          "linear oscillator: radius cap must be > 0");
  const double c = p.eps * p.d * p.omega_n;
  return make_diffusion_model(
      [c](double r) { return c * (0.5 / r - r); },
      [c](double) { return c; }, 0.0, radius_cap);
}

// ---------------------------------------------------------------------------
// Mathieu-type oscillator

DiffusionModel mathieu_energy_model(const MathieuParams& p,
                                    double energy_cap) {
  validate(p);
  if (energy_cap == 0.0) energy_cap = 20.0 * p.alpha1;
  require(std::isfinite(energy_cap) && energy_cap > 0.0,
          "mathieu energy model: energy cap must be > 0");
  const double c1 = kPi * p.nu1 * p.nu1 * p.S11_at_sqrt_alpha1;
  const double c2 = kPi * p.nu2 * p.nu2 * p.S22_at_2sqrt_alpha1 / p.alpha1;
  const double beta1 = p.beta1;
  return make_diffusion_model(
      [=](double H) { return -beta1 * H + c1 + c2 * H; },
      [=](double H) { return 2.0 * c1 * H + c2 * H * H; }, 0.0, energy_cap);
}

DiffusionModel ariaratnam_amplitude_model(const MathieuParams& p,
                                          double amplitude_cap) {
  validate(p);
  if (amplitude_cap == 0.0) amplitude_cap = std::sqrt(40.0);
  require(std::isfinite(amplitude_cap) && amplitude_cap > 0.0,
          "amplitude model: amplitude cap must be > 0");
  const double d1 = kPi * p.nu1 * p.nu1 * p.S11_at_sqrt_alpha1 / p.alpha1;
  const double d2 = kPi * p.nu2 * p.nu2 * p.S22_at_2sqrt_alpha1 / p.alpha1;
  const double beta1 = p.beta1;
  return make_diffusion_model(
      [=](double b) {
        return -0.5 * beta1 * b + 0.5 * d1 / b + 0.375 * d2 * b;
      },
      [=](double b) { return d1 + 0.25 * d2 * b * b; }, 0.0, amplitude_cap);
}

std::function<double(double)> amplitude_density_from_energy(
    std::function<double(double)> density_H, double alpha1) {
  require(static_cast<bool>(density_H),
          "amplitude_density_from_energy: null density");
  require(std::isfinite(alpha1) && alpha1 > 0.0,
          "amplitude_density_from_energy: alpha1 must be > 0");
  return [density_H = std::move(density_H), alpha1](double b) {
    const double H = 0.5 * alpha1 * b * b;
    return density_H(H) * std::sqrt(2.0 * alpha1 * H);
  };
}

// ---------------------------------------------------------------------------
// Softening Duffing oscillator

double DuffingParams::b_hetero() const { return std::sqrt(alpha1 / alpha3); }

double duffing_hamiltonian(double x, double y, const DuffingParams& p) {
  return 0.5 * y * y + 0.5 * p.alpha1 * x * x -
         0.25 * p.alpha3 * x * x * x * x;
}

bool inside_heteroclinic_region(double x, double y, const DuffingParams& p) {
  return duffing_hamiltonian(x, y, p) < p.H_crit() &&
         std::abs(x) < p.b_hetero();
}

double duffing_Q(double x, double H, const DuffingParams& p) {
  return 2.0 * H - p.alpha1 * x * x + 0.5 * p.alpha3 * x * x * x * x;
}

DuffingGeometry duffing_geometry(double H, const DuffingParams& p) {
  validate(p);
  require(std::isfinite(H) && H >= 0.0 && H < p.H_crit(),
          "duffing geometry: energy must lie in [0, H_crit)");
  // Rationalized forms: a^2 - b^2 = 2 sq / alpha3 and kc^2 = 2 sq/(alpha1+sq)
  // stay exact as H -> H_crit, where the naive b^2 = (alpha1 - sq)/alpha3
  // cancels catastrophically.
  const double sq = std::sqrt(std::max(
      (p.alpha1 - 2.0 * std::sqrt(p.alpha3 * H)) *
          (p.alpha1 + 2.0 * std::sqrt(p.alpha3 * H)),
      0.0));
  const double a2 = (p.alpha1 + sq) / p.alpha3;
  const double b2 = 4.0 * H / (p.alpha1 + sq);
  const double kc2 = 2.0 * sq / (p.alpha1 + sq);
  DuffingGeometry g;
  g.a = std::sqrt(a2);
  g.b = std::sqrt(b2);
  g.q = std::sqrt(0.5 * (p.alpha1 + sq));
  g.k = std::sqrt(std::max(1.0 - kc2, 0.0));
  g.T = 4.0 * detail::elliptic_K_from_kc2(kc2) / g.q;
  return g;
}

double duffing_damping_average(double H, const DuffingParams& p) {
  const DuffingGeometry g = duffing_geometry(H, p);
  if (H == 0.0) return 0.0;
  const double K = 0.25 * g.T * g.q;
  const double two_H = 2.0 * H;
  const auto integrand = [&](double u) {
    const JacobiTriple jt = jacobi_elliptic(u, g.k);
    const double Q = two_H * jt.cn * jt.cn * jt.dn * jt.dn;
    return Q * (-p.beta1 - p.beta2 * std::sqrt(Q) - p.beta3 * Q);
  };
  return integrate_gk(integrand, 0.0, K, 1e-11).value / K;
}

namespace detail {

namespace {

// E(k) - K(k), stable for small k^2 where the direct difference of two
// values near pi/2 loses all significant digits (the combination is O(k^2)
// while each integral carries O(eps) rounding). Series below the crossover,
// direct difference above it; both are ~5e-13-accurate at the switch.
double elliptic_E_minus_K(double k2, double kc2) {
  if (k2 < 1e-3) {
    return -(kPi / 2.0) * k2 *
           (0.5 + k2 * (3.0 / 16.0 +
                        k2 * (15.0 / 128.0 + k2 * (175.0 / 2048.0))));
  }
  return elliptic_E_from_kc2(kc2) - elliptic_K_from_kc2(kc2);
}

}  // namespace

DuffingWhiteTerms duffing_white_terms(double H, const DuffingParams& p) {
  const double sq =
      std::sqrt(std::max(p.alpha1 * p.alpha1 - 4.0 * p.alpha3 * H, 0.0));
  const double a2 = (p.alpha1 + sq) / p.alpha3;
  const double b2 = 4.0 * H / (p.alpha1 + sq);
  const double q2 = 0.5 * (p.alpha1 + sq);
  const double kc2 = 2.0 * sq / (p.alpha1 + sq);
  const double k2 = b2 / a2;
  const double K = elliptic_K_from_kc2(kc2);
  // EK1 = E/K - 1 = O(k^2): the elliptic factor of every coefficient, kept
  // in difference form so the O(H) leading terms below stay fully accurate
  // down to H ~ 1e-15 (they would otherwise drown in the rounding of E/K).
  const double EK1 = elliptic_E_minus_K(k2, kc2) / K;
  const double a4 = a2 * a2, b4 = b2 * b2;
  const double b6 = b4 * b2, a6 = a4 * a2;
  const double a2b2 = 4.0 * H / p.alpha3;  // exact product
  DuffingWhiteTerms t;
  // B1: alpha1 E/K - sq = alpha1 EK1 + (alpha1 - sq), with the second part
  // rationalized exactly.
  t.B1 = (2.0 * q2 / (3.0 * p.alpha3)) *
         (p.alpha1 * EK1 + 4.0 * p.alpha3 * H / (p.alpha1 + sq));
  // B2, B3: same grouping, folding the EK coefficient once into the
  // constant part (e.g. 3 a2b2 - 2a4 - b4 + (2a4 + 2b4 - 2 a2b2) =
  // a2b2 + b4).
  t.B2 = (q2 / 15.0) *
         (a2b2 + b4 + (2.0 * a4 + 2.0 * b4 - 2.0 * a2b2) * EK1);
  t.B3 = (q2 / 105.0) *
         (4.0 * a4 * b2 - 2.0 * a2 * b4 + 4.0 * b6 +
          (8.0 * a6 + 8.0 * b6 - 5.0 * a4 * b2 - 5.0 * a2 * b4) * EK1);
  t.C = 0.5 * p.nu1 * p.nu1 - 0.5 * p.nu2 * p.nu2 * a2 * EK1;
  return t;
}

DuffingColoredKernels duffing_colored_kernels(double H, const DuffingParams& p,
                                              double w) {
  const DuffingGeometry g = duffing_geometry(H, p);
  const double K = 0.25 * g.T * g.q;
  // 16 panels of the 30-point rule: plenty beyond the model builder's own
  // refinement target for a single diagnostic evaluation.
  const OrbitTables t = build_orbit_tables(g.k, K, 16);
  const double w_red = std::fmod(w, 4.0 * K);
  return eval_kernels(t, jacobi_elliptic(w_red, g.k));
}

}  // namespace detail

DiffusionModel duffing_white_model(const DuffingParams& p) {
  validate(p);
  require(p.nu1 > 0.0 || p.nu2 > 0.0,
          "duffing white model: at least one noise intensity must be "
          "positive");
  const double h_max = (1.0 - kCritGuard) * p.H_crit();
  const DuffingParams params = p;
  const auto drift = [params](double H) {
    const auto t = detail::duffing_white_terms(H, params);
    const double B = -(params.beta1 + 2.0 * params.beta3 * H) * t.B1 +
                     params.alpha1 * params.beta3 * t.B2 -
                     0.5 * params.alpha3 * params.beta3 * t.B3;
    return B + t.C;
  };
  const auto diff_sq = [params](double H) {
    const auto t = detail::duffing_white_terms(H, params);
    return params.nu1 * params.nu1 * t.B1 + params.nu2 * params.nu2 * t.B2;
  };
  return make_diffusion_model(drift, diff_sq, 0.0, h_max);
}

DriftDiffusion duffing_colored_coefficients(const DuffingParams& p,
                                            const AutocorrFn& R1,
                                            const AutocorrFn& R2, double H) {
  validate(p);
  return colored_coefficients_impl(p, R1, R2, H);
}

DiffusionModel duffing_colored_model(const DuffingParams& p,
                                     const AutocorrFn& R1,
                                     const AutocorrFn& R2) {
  validate(p);
  require(p.nu1 > 0.0 || p.nu2 > 0.0,
          "duffing colored model: at least one noise intensity must be "
          "positive");
  const double h_max = (1.0 - kCritGuard) * p.H_crit();

  // Boundary-refined tabulation grid: geometric cluster at H -> 0 resolves
  // the entrance behavior (sigma^2 ~ H), uniform coverage elsewhere.
  std::vector<double> grid;
  grid.push_back(0.0);
  const int n_geo = 25, n_uni = 176;
  for (int j = 0; j < n_geo; ++j)
    grid.push_back(h_max * std::pow(10.0, -10.0 + 8.3 * j / (n_geo - 1)));
  for (int j = 1; j <= n_uni; ++j)
    grid.push_back(h_max * (0.02 + 0.98 * j / static_cast<double>(n_uni)));
  grid.back() = h_max;

  std::vector<double> m_vals(grid.size()), s_vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DriftDiffusion c = colored_coefficients_impl(p, R1, R2, grid[i]);
    m_vals[i] = c.m;
    s_vals[i] = c.sigma_sq;
  }
  s_vals[0] = 0.0;  // b(0) = 0 makes this exact

  auto m_tab = std::make_shared<HermiteTable>(
      grid, m_vals, pchip_derivatives(grid, m_vals));
  auto s_tab = std::make_shared<HermiteTable>(
      grid, s_vals, pchip_derivatives(grid, s_vals));
  return make_diffusion_model([m_tab](double H) { return (*m_tab)(H); },
                              [s_tab](double H) { return (*s_tab)(H); }, 0.0,
                              h_max);
}

}  // namespace fpt
