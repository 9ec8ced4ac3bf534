#include "fpt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "fpt/errors.hpp"
#include "fpt/rng.hpp"

namespace fpt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

// Compensated (Neumaier) accumulator: the estimates must not depend on how
// paths were distributed over threads, so moments are formed in a second
// pass over the stored times, in fixed index order, with compensation.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

template <typename Fn>
void for_each_path(std::int64_t n, int threads_req, const Fn& fn) {
  int nt = threads_req == 0
               ? static_cast<int>(std::thread::hardware_concurrency())
               : threads_req;
  if (nt < 1) nt = 1;
  if (static_cast<std::int64_t>(nt) > n) nt = static_cast<int>(n);
  if (nt <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::mutex err_mu;
  std::exception_ptr err;
  const std::int64_t block = (n + nt - 1) / nt;
  for (int w = 0; w < nt; ++w) {
    const std::int64_t b = w * block;
    const std::int64_t e = std::min(n, b + block);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        for (std::int64_t i = b; i < e; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> g(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

FptStats finalize_stats(std::vector<double>& times,
                        const std::vector<unsigned char>& censored,
                        const McOptions& opts) {
  FptStats st;
  const std::int64_t n = static_cast<std::int64_t>(times.size());
  st.n_paths = n;
  for (unsigned char c : censored) st.n_censored += c;
  st.flagged = n > 0 && 1000 * st.n_censored >= n;

  KahanSum s;
  for (double t : times) s.add(t);
  const double mean = s.value() / static_cast<double>(n);

  KahanSum s2, s4;
  for (double t : times) {
    const double d = t - mean;
    const double d2 = d * d;
    s2.add(d2);
    s4.add(d2 * d2);
  }
  const double m2 = s2.value() / static_cast<double>(n);
  const double m4 = s4.value() / static_cast<double>(n);

  st.mean = mean;
  st.second_moment = m2 + mean * mean;
  // Derived from the stored second moment so that the documented identity
  // variance == second_moment - mean^2 holds bit-exactly on the fields.
  st.variance = st.second_moment - mean * mean;
  if (n > 1) {
    // Var(sample mean) = s^2 / n with s^2 = n m2 / (n - 1), i.e. m2/(n-1).
    st.se_mean = std::sqrt(m2 / static_cast<double>(n - 1));
    st.se_variance =
        std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
  } else {
    st.se_mean = kInf;
    st.se_variance = kInf;
  }
  if (opts.passage_times) *opts.passage_times = std::move(times);
  return st;
}

double max_diffusion_sq(const DiffusionModel& model, double xc) {
  const int n_scan = 257;
  double hi = 0.0;
  for (int i = 0; i < n_scan; ++i) {
    const double y = model.x_l + (xc - model.x_l) * (i + 0.5) /
                                     static_cast<double>(n_scan);
    hi = std::max(hi, model.diffusion_sq(y));
  }
  return hi;
}

struct PathResult {
  double t = 0.0;
  bool censored = false;
};

// One Euler-Maruyama path. The drift displacement is clamped to a few
// diffusion lengths: entrance-type models have drifts diverging like
// 1/(x - x_l), and an unclamped step from a deep reflection point would
// overshoot the whole domain. The clamp is inactive outside a boundary
// layer of width O(sqrt(dt)) because interior drifts move O(dt) per step.
PathResult path_1d(const DiffusionModel& model, double x_start, double xc,
                   double dt, std::int64_t n_steps, double t_cap,
                   double sig_ref, rng::Xoshiro256pp& engine) {
  rng::NormalGen normal(engine);
  const double sqrt_dt = std::sqrt(dt);
  const double x_l = model.x_l;
  double x = x_start;
  for (std::int64_t i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double sig2 = model.diffusion_sq(x);
    const double sig = std::sqrt(sig2);
    double disp = model.drift(x) * dt;
    const double cap = 4.0 * (sig + sig_ref) * sqrt_dt;
    if (std::isnan(disp)) {
      disp = 0.0;
    } else {
      disp = std::clamp(disp, -cap, cap);
    }
    double prop = x + disp + sig * sqrt_dt * normal.next();
    if (!std::isfinite(prop))
      throw NumericalError("simulate_fpt_1d: path state became non-finite");

    double t_pass = -1.0;
    if (prop >= xc) {
      t_pass = t + dt * (xc - x) / (prop - x);
    } else {
      if (prop < x_l) {
        prop = x_l + (x_l - prop);
        if (prop >= xc) t_pass = t + dt;  // reflected across the whole domain
      }
      if (t_pass < 0.0) {
        // Brownian-bridge test for a crossing between grid points: without
        // it the discrete minimum over-estimates passage times by O(sqrt(dt))
        // (the path can touch xc and return within one step).
        const double g0 = xc - x;
        const double g1 = xc - prop;
        if (g0 * g1 < 20.0 * sig2 * dt) {
          const double p_hit = std::exp(-2.0 * g0 * g1 / (sig2 * dt));
          if (engine.uniform() < p_hit) t_pass = t + 0.5 * dt;
        }
      }
    }
    if (t_pass >= 0.0) {
      if (t_pass > t_cap) break;
      return {t_pass, false};
    }
    x = prop;
  }
  return {t_cap, true};
}

// ---------------------------------------------------------------------------
// Full-oscillator driver

// Integrated excitation Int xi dt over one step. White spectra yield the
// exact Gaussian increment; colored spectra yield xi(t_n) dt (the O(dt)
// rectangle consistent with the first-order stepper): exp-cosine ones from
// the exact two-dimensional Ornstein-Uhlenbeck recursion whose real part
// has autocorrelation v exp(-lambda |s|) cos(Omega s), tabulated ones from
// the streaming harmonic synthesizer.
class ExcitationChannel {
 public:
  ExcitationChannel(const SpectrumSpec& spec, double dt, std::uint64_t seed,
                    std::uint64_t stream)
      : kind_(spec.kind), dt_(dt), engine_(seed, stream), normal_(engine_) {
    switch (kind_) {
      case SpectrumKind::White:
        inc_sd_ = std::sqrt(2.0 * kPi * spec.white_intensity * dt);
        break;
      case SpectrumKind::ExpCosine: {
        const double v = spec.variance;
        if (v <= 0.0) {
          dead_ = true;
          break;
        }
        const double damp = std::exp(-spec.decay * dt);
        rot_c_ = damp * std::cos(spec.center * dt);
        rot_s_ = damp * std::sin(spec.center * dt);
        innov_sd_ = std::sqrt(v * (1.0 - damp * damp));
        const double sd0 = std::sqrt(v);
        z_re_ = sd0 * normal_.next();
        z_im_ = sd0 * normal_.next();
        break;
      }
      case SpectrumKind::Tabulated: {
        std::uint64_t st = seed + stream * 0x9E3779B97F4A7C15ULL;
        synth_.emplace(spec, dt, rng::splitmix64(st));
        break;
      }
    }
  }

  double increment() {
    switch (kind_) {
      case SpectrumKind::White:
        return inc_sd_ * normal_.next();
      case SpectrumKind::ExpCosine: {
        if (dead_) return 0.0;
        const double value = z_re_;
        const double re = z_re_ * rot_c_ - z_im_ * rot_s_;
        z_im_ = z_re_ * rot_s_ + z_im_ * rot_c_ + innov_sd_ * normal_.next();
        z_re_ = re + innov_sd_ * normal_.next();
        return value * dt_;
      }
      case SpectrumKind::Tabulated:
      default:
        return synth_->next() * dt_;
    }
  }

 private:
  SpectrumKind kind_;
  double dt_;
  rng::Xoshiro256pp engine_;
  rng::NormalGen normal_;
  bool dead_ = false;
  double inc_sd_ = 0.0;
  double rot_c_ = 0.0, rot_s_ = 0.0, innov_sd_ = 0.0;
  double z_re_ = 0.0, z_im_ = 0.0;
  std::optional<HarmonicSynth> synth_;
};

// Semi-implicit (symplectic) Euler step: y first with the force evaluated
// at the current x, then x with the updated y.
inline void symplectic_step(const DuffingParams& p, double dt,
                            double noise_impulse, double& x, double& y) {
  const double force = -p.alpha1 * x + p.alpha3 * x * x * x;
  const double damp =
      -p.eps * (p.beta1 * y + p.beta2 * std::abs(y) * y + p.beta3 * y * y * y);
  y += dt * (force + damp) + noise_impulse;
  x += dt * y;
}

PathResult path_duffing(const DuffingParams& p, const SpectrumSpec& spec1,
                        const SpectrumSpec& spec2, double H_c, double dt,
                        std::int64_t n_steps, double t_cap, double x0,
                        double y0, double orbit_period, bool randomize_phase,
                        std::uint64_t seed, std::int64_t path_index) {
  const std::uint64_t base = 3 * static_cast<std::uint64_t>(path_index);
  const bool use1 = p.nu1 > 0.0;
  const bool use2 = p.nu2 > 0.0;
  ExcitationChannel ch1(use1 ? spec1 : SpectrumSpec{}, dt, seed, base + 1);
  ExcitationChannel ch2(use2 ? spec2 : SpectrumSpec{}, dt, seed, base + 2);

  double x = x0;
  double y = y0;
  if (randomize_phase && orbit_period > 0.0) {
    rng::Xoshiro256pp phase_engine(seed, base);
    const double u = phase_engine.uniform() * orbit_period;
    const std::int64_t n_spin = static_cast<std::int64_t>(std::floor(u / dt));
    for (std::int64_t i = 0; i < n_spin; ++i) {
      // Conservative spin along the initial orbit: force only, no damping.
      y += dt * (-p.alpha1 * x + p.alpha3 * x * x * x);
      x += dt * y;
    }
  }

  const double b_sad = p.b_hetero();
  const double rt_eps = std::sqrt(p.eps);
  double H = duffing_hamiltonian(x, y, p);
  for (std::int64_t i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    double noise = 0.0;
    if (use1) noise += p.nu1 * ch1.increment();
    if (use2) noise += p.nu2 * x * ch2.increment();
    symplectic_step(p, dt, rt_eps * noise, x, y);
    if (!std::isfinite(x) || !std::isfinite(y))
      throw NumericalError("simulate_duffing_fpt: state became non-finite");
    const double H_next = duffing_hamiltonian(x, y, p);
    if (H_next >= H_c || std::abs(x) >= b_sad) {
      const double frac =
          H_next > H ? std::clamp((H_c - H) / (H_next - H), 0.0, 1.0) : 1.0;
      const double t_pass = t + frac * dt;
      if (t_pass > t_cap) break;
      return {t_pass, false};
    }
    H = H_next;
  }
  return {t_cap, true};
}

void validate_common(double dt, std::int64_t n_paths, double t_cap,
                     const char* who) {
  if (!(std::isfinite(dt) && dt > 0.0))
    throw ValidationError(std::string(who) + ": dt must be finite and > 0");
  if (!(std::isfinite(t_cap) && t_cap > 0.0))
    throw ValidationError(std::string(who) + ": t_cap must be finite and > 0");
  if (n_paths < 1)
    throw ValidationError(std::string(who) + ": need n_paths >= 1");
  if (!(std::ceil(t_cap / dt) <= 9.0e15))
    throw ValidationError(std::string(who) +
                          ": t_cap / dt exceeds the step budget");
}

FptStats all_zero_stats(std::int64_t n_paths, const McOptions& opts) {
  std::vector<double> times(static_cast<std::size_t>(n_paths), 0.0);
  const std::vector<unsigned char> cens(static_cast<std::size_t>(n_paths), 0);
  return finalize_stats(times, cens, opts);
}

}  // namespace

FptStats simulate_fpt_1d(const DiffusionModel& model, double x0, double xc,
                         double dt, std::int64_t n_paths, double t_cap,
                         std::uint64_t seed, const McOptions& opts) {
  validate_common(dt, n_paths, t_cap, "simulate_fpt_1d");
  require(model.x_l <= x0 && x0 <= xc && xc <= model.x_c,
          "simulate_fpt_1d: need x_l <= x0 <= xc <= x_c");
  if (x0 == xc) return all_zero_stats(n_paths, opts);

  const double x_start =
      x0 == model.x_l ? model.x_l + 1e-6 * (xc - model.x_l) : x0;
  const double sig_ref = std::sqrt(max_diffusion_sq(model, xc));
  const std::int64_t n_steps =
      static_cast<std::int64_t>(std::ceil(t_cap / dt));

  std::vector<double> times(static_cast<std::size_t>(n_paths), 0.0);
  std::vector<unsigned char> cens(static_cast<std::size_t>(n_paths), 0);
  for_each_path(n_paths, opts.n_threads, [&](std::int64_t i) {
    rng::Xoshiro256pp engine(seed, static_cast<std::uint64_t>(i));
    const PathResult r =
        path_1d(model, x_start, xc, dt, n_steps, t_cap, sig_ref, engine);
    times[static_cast<std::size_t>(i)] = r.t;
    cens[static_cast<std::size_t>(i)] = r.censored ? 1 : 0;
  });
  return finalize_stats(times, cens, opts);
}

FptStats simulate_duffing_fpt(const DuffingParams& p, const SpectrumSpec& spec1,
                              const SpectrumSpec& spec2, double H_c, double dt,
                              std::int64_t n_paths, double t_cap,
                              std::uint64_t seed, double x0, double y0,
                              const McOptions& opts) {
  validate_common(dt, n_paths, t_cap, "simulate_duffing_fpt");
  require(std::isfinite(p.alpha1) && p.alpha1 > 0.0 && std::isfinite(p.alpha3) &&
              p.alpha3 > 0.0,
          "simulate_duffing_fpt: need alpha1 > 0 and alpha3 > 0");
  require(p.beta1 >= 0.0 && p.beta2 >= 0.0 && p.beta3 >= 0.0,
          "simulate_duffing_fpt: damping coefficients must be >= 0");
  require(p.nu1 >= 0.0 && p.nu2 >= 0.0,
          "simulate_duffing_fpt: noise intensities must be >= 0");
  require(std::isfinite(p.eps) && p.eps > 0.0,
          "simulate_duffing_fpt: need eps > 0");
  require(H_c > 0.0 && H_c < p.H_crit(),
          "simulate_duffing_fpt: need 0 < H_c < H_crit");
  require(inside_heteroclinic_region(x0, y0, p),
          "simulate_duffing_fpt: initial condition outside the heteroclinic "
          "region");

  const double H0 = duffing_hamiltonian(x0, y0, p);
  if (H0 >= H_c) return all_zero_stats(n_paths, opts);
  const double orbit_period =
      (opts.randomize_phase && H0 > 0.0) ? duffing_geometry(H0, p).T : 0.0;
  const std::int64_t n_steps =
      static_cast<std::int64_t>(std::ceil(t_cap / dt));

  std::vector<double> times(static_cast<std::size_t>(n_paths), 0.0);
  std::vector<unsigned char> cens(static_cast<std::size_t>(n_paths), 0);
  for_each_path(n_paths, opts.n_threads, [&](std::int64_t i) {
    const PathResult r =
        path_duffing(p, spec1, spec2, H_c, dt, n_steps, t_cap, x0, y0,
                     orbit_period, opts.randomize_phase, seed, i);
    times[static_cast<std::size_t>(i)] = r.t;
    cens[static_cast<std::size_t>(i)] = r.censored ? 1 : 0;
  });
  return finalize_stats(times, cens, opts);
}

CompareReport compare_stats(double quadrature_M1, double quadrature_M2,
                            const FptStats& stats) {
  CompareReport rep;
  const double var_q = quadrature_M2 - quadrature_M1 * quadrature_M1;
  const double dm = stats.mean - quadrature_M1;
  const double dv = stats.variance - var_q;
  rep.z_mean = dm == 0.0 ? 0.0 : dm / stats.se_mean;
  rep.z_variance = dv == 0.0 ? 0.0 : dv / stats.se_variance;
  rep.mean_ok = std::abs(rep.z_mean) <= 3.0;
  rep.variance_ok = std::abs(rep.z_variance) <= 3.0;
  rep.pass = rep.mean_ok && rep.variance_ok && !stats.flagged;
  return rep;
}

double default_dt_1d(const DiffusionModel& model, double xc) {
  require(model.x_l < xc && xc <= model.x_c,
          "default_dt_1d: need x_l < xc <= x_c");
  const double span = xc - model.x_l;
  const double hi = max_diffusion_sq(model, xc);
  return std::min(1e-3, 1e-3 * span * span / hi);
}

double duffing_default_dt(const DuffingParams& p) {
  return duffing_geometry(0.0, p).T / 200.0;
}

std::vector<double> duffing_energy_trace(const DuffingParams& p, double x0,
                                         double y0, double dt,
                                         std::int64_t n_steps) {
  require(std::isfinite(dt) && dt > 0.0,
          "duffing_energy_trace: dt must be finite and > 0");
  require(n_steps >= 0, "duffing_energy_trace: need n_steps >= 0");
  std::vector<double> H;
  H.reserve(static_cast<std::size_t>(n_steps) + 1);
  double x = x0, y = y0;
  H.push_back(duffing_hamiltonian(x, y, p));
  for (std::int64_t i = 0; i < n_steps; ++i) {
    symplectic_step(p, dt, 0.0, x, y);
    H.push_back(duffing_hamiltonian(x, y, p));
  }
  return H;
}

void write_passage_times(const std::string& path,
                         const std::vector<double>& times) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError("write_passage_times: cannot open " + path);
  out << std::setprecision(17);
  for (double t : times) out << t << '\n';
  if (!out)
    throw NumericalError("write_passage_times: write failed for " + path);
}

}  // namespace fpt
