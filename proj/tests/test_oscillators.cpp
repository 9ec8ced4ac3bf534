#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "fpt/diffusion.hpp"
#include "fpt/errors.hpp"
#include "fpt/first_passage.hpp"
#include "fpt/oscillators.hpp"
#include "fpt/specfun.hpp"
#include "oracle_constants.hpp"
#include "oracles.hpp"

using fpt::amplitude_density_from_energy;
using fpt::ariaratnam_amplitude_model;
using fpt::AutocorrFn;
using fpt::BoundaryKind;
using fpt::classify_left_boundary;
using fpt::complete_elliptic_E;
using fpt::complete_elliptic_K;
using fpt::DiffusionModel;
using fpt::DriftDiffusion;
using fpt::duffing_colored_coefficients;
using fpt::duffing_colored_model;
using fpt::duffing_damping_average;
using fpt::duffing_geometry;
using fpt::duffing_hamiltonian;
using fpt::duffing_Q;
using fpt::duffing_white_model;
using fpt::DuffingGeometry;
using fpt::DuffingParams;
using fpt::inside_heteroclinic_region;
using fpt::jacobi_elliptic;
using fpt::JacobiTriple;
using fpt::linear_amplitude_model;
using fpt::linear_amplitude_scale;
using fpt::LinearOscParams;
using fpt::mathieu_energy_model;
using fpt::MathieuParams;
using fpt::mean_fpt_entrance;
using fpt::NumericalError;
using fpt::stationary_density_fn;
using fpt::ValidationError;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Published softening-oscillator parameter set used for the frozen values.
DuffingParams table_params() {
  DuffingParams p;
  p.alpha1 = 3.187;
  p.alpha3 = 4.164;
  p.beta1 = 0.655;
  p.beta2 = 0.921;
  p.beta3 = 0.0;
  p.nu1 = 0.018;
  p.nu2 = 1.783;
  p.eps = 0.1;
  return p;
}

MathieuParams mathieu_ref() {
  MathieuParams p;
  p.alpha1 = 2.0;
  p.beta1 = 0.1;
  p.nu1 = 0.4;
  p.nu2 = 0.5;
  p.eps = 0.05;
  p.S11_at_sqrt_alpha1 = 1.0;
  p.S22_at_2sqrt_alpha1 = 1.0;
  return p;
}

// Unit-mass Gaussian lag kernel: the white-noise limit as width -> 0.
AutocorrFn narrow_gaussian(double width) {
  return [width](double s) {
    return std::exp(-0.5 * s * s / (width * width)) /
           (width * std::sqrt(2.0 * kPi));
  };
}

// Exponential-cosine autocorrelation R(s) = v e^{-lambda |s|} cos(Omega s).
AutocorrFn exp_cosine(double v, double lambda, double Omega) {
  return [=](double s) {
    return v * std::exp(-lambda * std::abs(s)) * std::cos(Omega * s);
  };
}

}  // namespace

TEST_SUITE("oscillators") {

TEST_CASE("linear amplitude model carries the averaged coefficients") {
  LinearOscParams p{0.05, 2.0, 0.1, 0.3};
  const double c = 0.1 * 0.05 * 2.0;
  const DiffusionModel m = linear_amplitude_model(p, 2.2);
  CHECK(m.x_l == 0.0);
  CHECK(m.x_c == 2.2);
  CHECK(m.drift(0.7) == doctest::Approx(c * (0.5 / 0.7 - 0.7)).epsilon(1e-14));
  CHECK(m.drift(1.9) == doctest::Approx(c * (0.5 / 1.9 - 1.9)).epsilon(1e-14));
  CHECK(m.diffusion_sq(0.3) == doctest::Approx(c).epsilon(1e-15));
  CHECK(m.diffusion_sq(2.0) == doctest::Approx(c).epsilon(1e-15));

  CHECK(linear_amplitude_scale(p) ==
        doctest::Approx(std::sqrt(0.5 * 0.05 * 8.0 * 0.3)).epsilon(1e-15));

  CHECK_THROWS_AS(linear_amplitude_model({-0.05, 2.0, 0.1, 0.3}),
                  ValidationError);
  CHECK_THROWS_AS(linear_amplitude_model({0.05, 0.0, 0.1, 0.3}),
                  ValidationError);
  CHECK_THROWS_AS(linear_amplitude_model({0.05, 2.0, -0.1, 0.3}),
                  ValidationError);
  CHECK_THROWS_AS(linear_amplitude_model({0.05, 2.0, 0.1, -0.3}),
                  ValidationError);
  CHECK_THROWS_AS(linear_amplitude_model(p, 0.0), ValidationError);
}

TEST_CASE("linear amplitude: entrance boundary and Rayleigh stationary law") {
  // eps d omega_n = 1 normalizes time; the stationary amplitude law is then
  // the Rayleigh density 2 r exp(-r^2), independent of that rate anyway.
  const DiffusionModel m = linear_amplitude_model({1.0, 1.0, 1.0, 0.3});
  CHECK(classify_left_boundary(m) == BoundaryKind::Entrance);
  const auto dens = stationary_density_fn(m);
  for (double r : {0.3, 0.8, 1.4, 2.3}) {
    CHECK(dens(r) ==
          doctest::Approx(2.0 * r * std::exp(-r * r)).epsilon(1e-7));
  }
}

TEST_CASE("linear amplitude passage times: reference values and time scaling") {
  // With eps d omega_n = 1 and cap 2.2 this is exactly the normalized
  // amplitude model of the passage-time reference table.
  const DiffusionModel m = linear_amplitude_model({1.0, 1.0, 1.0, 0.3}, 2.2);
  CHECK(mean_fpt_entrance(m, 1.0, 2.2) ==
        doctest::Approx(oracle::r_M1_10).epsilon(1e-7));

  // Doubling the natural frequency doubles the rate eps d omega_n and so
  // halves every passage time.
  const DiffusionModel m2 = linear_amplitude_model({1.0, 2.0, 1.0, 0.3}, 2.2);
  CHECK(mean_fpt_entrance(m2, 1.0, 2.2) ==
        doctest::Approx(0.5 * oracle::r_M1_10).epsilon(1e-7));
}

TEST_CASE("mathieu energy model: coefficients, entrance, frozen speed measure") {
  const MathieuParams p = mathieu_ref();
  const double c1 = kPi * 0.16;          // pi nu1^2 S11
  const double c2 = kPi * 0.25 / 2.0;    // pi nu2^2 S22 / alpha1
  const DiffusionModel m = mathieu_energy_model(p);
  CHECK(m.x_c == doctest::Approx(40.0).epsilon(1e-15));  // default 20 alpha1
  CHECK(m.drift(0.0) == doctest::Approx(c1).epsilon(1e-14));
  CHECK(m.drift(0.7) ==
        doctest::Approx(-0.1 * 0.7 + c1 + c2 * 0.7).epsilon(1e-14));
  CHECK(m.diffusion_sq(0.7) ==
        doctest::Approx(2.0 * c1 * 0.7 + c2 * 0.49).epsilon(1e-14));

  CHECK(classify_left_boundary(m) == BoundaryKind::Entrance);
  const auto Nl = fpt::measure_N_l(m, 0.5);
  CHECK_FALSE(Nl.infinite);
  CHECK(Nl.value == doctest::Approx(oracle::mat_Nl_05).epsilon(1e-8));
  CHECK(fpt::measure_Sigma_l(m, 0.5).infinite);

  MathieuParams bad = p;
  bad.nu1 = bad.nu2 = 0.0;
  CHECK_THROWS_AS(mathieu_energy_model(bad), ValidationError);
  CHECK_THROWS_AS(mathieu_energy_model(p, -1.0), ValidationError);
}

TEST_CASE("mathieu with additive noise only: exponential stationary energy") {
  MathieuParams p = mathieu_ref();
  p.nu2 = 0.0;
  const double c1 = kPi * 0.16;
  const double rate = p.beta1 / c1;
  const double cap = 40.0;
  const DiffusionModel m = mathieu_energy_model(p);
  CHECK(classify_left_boundary(m) == BoundaryKind::Entrance);
  const auto dens = stationary_density_fn(m);
  const double norm = rate / (1.0 - std::exp(-rate * cap));
  for (double H : {0.2, 1.0, 3.7, 11.0}) {
    CHECK(dens(H) ==
          doctest::Approx(norm * std::exp(-rate * H)).epsilon(1e-7));
  }
}

TEST_CASE("amplitude model: asymptotics and the energy-density identity") {
  const MathieuParams p = mathieu_ref();
  const DiffusionModel am = ariaratnam_amplitude_model(p);
  CHECK(am.x_c == doctest::Approx(std::sqrt(40.0)).epsilon(1e-15));
  // Repulsive near the origin, linear-damping dominated far out.
  CHECK(am.drift(0.01) > 0.0);
  MathieuParams padd = p;
  padd.nu2 = 0.0;
  const DiffusionModel am2 = ariaratnam_amplitude_model(padd, 1000.0);
  CHECK(am2.drift(500.0) ==
        doctest::Approx(-0.5 * p.beta1 * 500.0).epsilon(1e-4));
  CHECK(classify_left_boundary(am) == BoundaryKind::Entrance);

  // The amplitude process is the exact image of the energy process under
  // H = alpha1 b^2 / 2, so the stationary densities must transform into one
  // another. Capping the energy at 18 alpha1 matches amplitude cap 6.
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int trial = 0; trial < 13; ++trial) {
    MathieuParams q;
    q.eps = 0.05;
    if (trial < 3) {
      q = mathieu_ref();
      q.beta1 = (trial == 0) ? 0.03 : (trial == 1) ? 0.18 : 0.72;
    } else {
      q.alpha1 = 0.5 + 3.5 * testoracle::next_unit(state);
      q.beta1 = 0.02 + 0.98 * testoracle::next_unit(state);
      q.nu1 = 0.1 + 1.4 * testoracle::next_unit(state);
      q.nu2 = 0.1 + 1.4 * testoracle::next_unit(state);
      q.S11_at_sqrt_alpha1 = 0.2 + 1.8 * testoracle::next_unit(state);
      q.S22_at_2sqrt_alpha1 = 0.2 + 1.8 * testoracle::next_unit(state);
    }
    const DiffusionModel em = mathieu_energy_model(q, 18.0 * q.alpha1);
    const DiffusionModel aq = ariaratnam_amplitude_model(q, 6.0);
    const auto pH = stationary_density_fn(em);
    const auto pA = stationary_density_fn(aq);
    const auto pT = amplitude_density_from_energy(pH, q.alpha1);
    for (double b : {0.01, 0.3, 0.9, 1.7, 2.6, 4.0, 5.2, 5.9}) {
      CHECK(pT(b) == doctest::Approx(pA(b)).epsilon(1e-6));
    }
  }

  CHECK_THROWS_AS(amplitude_density_from_energy(nullptr, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(
      amplitude_density_from_energy([](double) { return 1.0; }, 0.0),
      ValidationError);
}

TEST_CASE("duffing geometry matches the frozen orbit constants") {
  const DuffingParams p = table_params();
  CHECK(p.H_crit() == doctest::Approx(oracle::du_Hcrit).epsilon(1e-14));
  CHECK(p.b_hetero() ==
        doctest::Approx(std::sqrt(3.187 / 4.164)).epsilon(1e-15));

  const DuffingGeometry g = duffing_geometry(0.529, p);
  CHECK(g.b == doctest::Approx(oracle::du_b_Hc).epsilon(1e-12));
  CHECK(g.b * 180.0 / kPi ==
        doctest::Approx(oracle::du_b_Hc_deg).epsilon(1e-12));
  CHECK(g.b * 180.0 / kPi == doctest::Approx(40.0).epsilon(1e-3));
  CHECK(g.k == doctest::Approx(oracle::du_k_Hc).epsilon(1e-12));
  CHECK(g.q == doctest::Approx(oracle::du_q_Hc).epsilon(1e-12));
  CHECK(g.T == doctest::Approx(oracle::du_T_Hc).epsilon(1e-12));
  CHECK(g.k == doctest::Approx(g.b / g.a).epsilon(1e-14));

  // Harmonic limit and period blow-up toward the heteroclinic energy.
  CHECK(duffing_geometry(0.0, p).T ==
        doctest::Approx(oracle::du_T_0).epsilon(1e-14));
  CHECK(duffing_geometry(1e-10 * p.H_crit(), p).T ==
        doctest::Approx(oracle::du_T_0).epsilon(1e-6));
  // The period diverges only logarithmically, T ~ ln(1/(1 - H/H_crit)):
  // within 1e-10 of the critical energy it reaches about 6 T(0).
  CHECK(duffing_geometry((1.0 - 1e-10) * p.H_crit(), p).T >
        5.0 * oracle::du_T_0);

  CHECK_THROWS_AS(duffing_geometry(p.H_crit(), p), ValidationError);
  CHECK_THROWS_AS(duffing_geometry(2.0 * p.H_crit(), p), ValidationError);
  CHECK_THROWS_AS(duffing_geometry(-0.1, p), ValidationError);

  // The parametrization x = b sn(qt), y = b q cn dn conserves H exactly and
  // the turning point b is a root of the kinetic polynomial Q.
  for (double H : {0.1, 0.37, 0.529}) {
    const DuffingGeometry gg = duffing_geometry(H, p);
    CHECK(std::abs(duffing_Q(gg.b, H, p)) < 1e-10 * H);
    for (double frac : {0.13, 0.29, 0.41, 0.77}) {
      const JacobiTriple jt = jacobi_elliptic(gg.q * frac * gg.T, gg.k);
      const double x = gg.b * jt.sn;
      const double y = gg.b * gg.q * jt.cn * jt.dn;
      CHECK(duffing_hamiltonian(x, y, p) == doctest::Approx(H).epsilon(1e-12));
      CHECK(inside_heteroclinic_region(x, y, p));
      // y^2 = Q(x, H) along the orbit.
      CHECK(y * y == doctest::Approx(duffing_Q(x, H, p)).epsilon(1e-10));
    }
  }
  CHECK_FALSE(inside_heteroclinic_region(p.b_hetero(), 0.0, p));
  CHECK_FALSE(inside_heteroclinic_region(0.0, std::sqrt(2.5 * p.H_crit()), p));
}

TEST_CASE("duffing white terms and model match the frozen references") {
  const DuffingParams p = table_params();
  const auto t = fpt::detail::duffing_white_terms(0.3, p);
  CHECK(t.B1 == doctest::Approx(oracle::du_B1_03).epsilon(1e-12));
  CHECK(t.B2 == doctest::Approx(oracle::du_B2_03).epsilon(1e-12));
  CHECK(t.B3 == doctest::Approx(oracle::du_B3_03).epsilon(1e-12));
  CHECK(t.C == doctest::Approx(oracle::du_C_03).epsilon(1e-12));

  const DiffusionModel m = duffing_white_model(p);
  CHECK(m.x_l == 0.0);
  CHECK(m.x_c == doctest::Approx((1.0 - 1e-6) * p.H_crit()).epsilon(1e-15));
  CHECK(m.drift(0.3) == doctest::Approx(oracle::du_m_03_white).epsilon(1e-12));
  CHECK(m.diffusion_sq(0.3) ==
        doctest::Approx(oracle::du_sig2_03).epsilon(1e-12));

  // Zero-energy limits: m(0) = nu1^2/2 exactly, sigma^2(0) = 0, and the
  // additive channel gives sigma^2 ~ nu1^2 H near the origin.
  CHECK(m.drift(0.0) ==
        doctest::Approx(0.5 * p.nu1 * p.nu1).epsilon(1e-14));
  CHECK(std::abs(m.diffusion_sq(0.0)) < 1e-18);
  const double h_small = 1e-6 * p.H_crit();
  CHECK(m.diffusion_sq(h_small) / (p.nu1 * p.nu1 * h_small) ==
        doctest::Approx(1.0).epsilon(1.5e-3));

  // Smooth and sign-correct across the whole domain.
  for (int i = 0; i <= 200; ++i) {
    const double H = 0.999 * p.H_crit() * i / 200.0;
    CHECK(std::isfinite(m.drift(H)));
    CHECK(m.diffusion_sq(H) >= 0.0);
  }
  CHECK(classify_left_boundary(m) == BoundaryKind::Entrance);

  DuffingParams bad = p;
  bad.nu1 = bad.nu2 = 0.0;
  CHECK_THROWS_AS(duffing_white_model(bad), ValidationError);
  bad = p;
  bad.alpha3 = 0.0;
  CHECK_THROWS_AS(duffing_white_model(bad), ValidationError);
}

TEST_CASE("duffing damping average reproduces the closed forms") {
  DuffingParams p = table_params();
  CHECK(duffing_damping_average(0.0, p) == 0.0);

  // Linear damping only: the average is -beta1 B1(H).
  DuffingParams lin = p;
  lin.beta2 = lin.beta3 = 0.0;
  for (double H : {0.1, 0.3, 0.52}) {
    const auto t = fpt::detail::duffing_white_terms(H, lin);
    CHECK(duffing_damping_average(H, lin) ==
          doctest::Approx(-lin.beta1 * t.B1).epsilon(1e-8));
  }

  // Cubic damping only: independent check of the B2/B3 assembly.
  DuffingParams cub = p;
  cub.beta1 = cub.beta2 = 0.0;
  cub.beta3 = 0.4;
  for (double H : {0.1, 0.3, 0.52}) {
    const auto t = fpt::detail::duffing_white_terms(H, cub);
    const double closed = -2.0 * cub.beta3 * H * t.B1 +
                          cub.alpha1 * cub.beta3 * t.B2 -
                          0.5 * cub.alpha3 * cub.beta3 * t.B3;
    CHECK(duffing_damping_average(H, cub) ==
          doctest::Approx(closed).epsilon(1e-8));
  }

  // Quadratic damping strictly lowers the average; the full published set
  // reproduces the frozen value.
  CHECK(duffing_damping_average(0.3, p) <
        duffing_damping_average(0.3, lin));
  CHECK(duffing_damping_average(0.3, p) ==
        doctest::Approx(oracle::du_damp_03).epsilon(1e-10));
}

TEST_CASE("duffing colored kernels: white limits and quadrature oracle") {
  const DuffingParams p = table_params();

  // White limits w = 0 against closed elliptic forms.
  for (double H : {0.15, 0.3, 0.45}) {
    const DuffingGeometry g = duffing_geometry(H, p);
    const double k2 = g.k * g.k;
    const double K = complete_elliptic_K(g.k);
    const double E = complete_elliptic_E(g.k);
    const auto at0 = fpt::detail::duffing_colored_kernels(H, p, 0.0);
    CHECK(at0.P1 == doctest::Approx(2.0 * K).epsilon(1e-9));
    CHECK(at0.P2 == doctest::Approx(2.0 * (K - E) / k2).epsilon(1e-9));
    CHECK(at0.Q1 == doctest::Approx(2.0 *
        ((1.0 + k2) * E - (1.0 - k2) * K) / (3.0 * k2)).epsilon(1e-9));
    const double q2_ref = 2.0 * testoracle::integrate(
        [&](double u) {
          const JacobiTriple j = jacobi_elliptic(u, g.k);
          const double A = j.cn * j.dn;
          return j.sn * j.sn * A * A;
        },
        0.0, K, 1e-12);
    CHECK(at0.Q2 == doctest::Approx(q2_ref).epsilon(1e-9));

    // Reassembled as drift/diffusion factors, the w = 0 kernels reproduce
    // the closed-form white coefficients exactly.
    const auto t = fpt::detail::duffing_white_terms(H, p);
    const double b2 = g.b * g.b;
    CHECK((1.0 / (g.T * g.q)) * at0.P1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((1.0 / (g.T * g.q)) * b2 * at0.P2 ==
          doctest::Approx(-(g.a * g.a) *
                          (E / K - 1.0) / 2.0).epsilon(1e-9));
    CHECK((2.0 * b2 * g.q / g.T) * at0.Q1 ==
          doctest::Approx(t.B1).epsilon(1e-9));
    CHECK((2.0 * b2 * b2 * g.q / g.T) * at0.Q2 ==
          doctest::Approx(t.B2).epsilon(1e-9));
  }

  // Principal-value oracle at a nonzero shift: the PV of the raw singular
  // integrand over the symmetric window [-K+d, K-d] is exactly
  // Int_0^{K-d} [f(u) + f(-u)] du; pairing the reflected evaluations
  // cancels the 1/(cn dn) walls pointwise, so plain quadrature applies. The
  // window integral approaches the kernel linearly in d (the omitted part
  // is bounded), and two window sizes extrapolate to d = 0.
  const double H = 0.37;
  const DuffingGeometry g = duffing_geometry(H, p);
  const double K = complete_elliptic_K(g.k);
  const double w = 0.6;
  const auto ker = fpt::detail::duffing_colored_kernels(H, p, w);

  const auto raw_P1 = [&](double u) {
    const JacobiTriple ju = jacobi_elliptic(u, g.k);
    const JacobiTriple js = jacobi_elliptic(u + w, g.k);
    return js.cn * js.dn / (ju.cn * ju.dn);
  };
  const auto raw_P2 = [&](double u) {
    const JacobiTriple ju = jacobi_elliptic(u, g.k);
    const JacobiTriple js = jacobi_elliptic(u + w, g.k);
    return ju.sn * js.sn * js.cn * js.dn / (ju.cn * ju.dn);
  };
  const auto pv_extrapolate = [&](const std::function<double(double)>& f) {
    const auto paired = [&](double u) { return f(u) + f(-u); };
    const double d1 = 1e-3 * K, d2 = 1e-4 * K;
    const double i1 = testoracle::integrate(paired, 0.0, K - d1, 1e-10);
    const double i2 = testoracle::integrate(paired, 0.0, K - d2, 1e-10);
    // Linear-in-d Richardson: I(0) = (10 I(d2) - I(d1)) / 9 for d1 = 10 d2.
    return (10.0 * i2 - i1) / 9.0;
  };
  CHECK(ker.P1 == doctest::Approx(pv_extrapolate(raw_P1)).epsilon(1e-6));
  CHECK(ker.P2 == doctest::Approx(pv_extrapolate(raw_P2)).epsilon(1e-6));

  // The nonsingular kernels equal the even-in-w part of the raw integrals.
  const auto raw_Q = [&](double shift, bool parametric) {
    return 2.0 * testoracle::integrate(
        [&, shift, parametric](double u) {
          const JacobiTriple ju = jacobi_elliptic(u, g.k);
          const JacobiTriple js = jacobi_elliptic(u + shift, g.k);
          const double base = ju.cn * ju.dn * js.cn * js.dn;
          return parametric ? ju.sn * js.sn * base : base;
        },
        0.0, K, 1e-12);
  };
  CHECK(ker.Q1 ==
        doctest::Approx(0.5 * (raw_Q(w, false) + raw_Q(-w, false)))
            .epsilon(1e-9));
  CHECK(ker.Q2 ==
        doctest::Approx(0.5 * (raw_Q(w, true) + raw_Q(-w, true)))
            .epsilon(1e-9));
}

TEST_CASE("duffing colored coefficients: white limit and degenerate inputs") {
  DuffingParams p = table_params();
  p.beta2 = 0.0;  // the closed-form white drift carries beta1/beta3 only

  const DiffusionModel white = duffing_white_model(p);
  const DuffingGeometry g03 = duffing_geometry(0.3, p);
  const AutocorrFn narrow = narrow_gaussian(g03.T / 1000.0);
  for (double H : {0.15, 0.3, 0.45}) {
    const DriftDiffusion c = duffing_colored_coefficients(p, narrow, narrow, H);
    CHECK(c.m == doctest::Approx(white.drift(H)).epsilon(1e-2));
    CHECK(c.sigma_sq == doctest::Approx(white.diffusion_sq(H)).epsilon(1e-2));
  }

  // No excitation: drift reduces to the damping average, diffusion to zero.
  const DriftDiffusion quiet =
      duffing_colored_coefficients(table_params(), nullptr, nullptr, 0.3);
  CHECK(quiet.m ==
        doctest::Approx(duffing_damping_average(0.3, table_params()))
            .epsilon(1e-14));
  CHECK(quiet.sigma_sq == 0.0);
  const AutocorrFn zero = [](double) { return 0.0; };
  const DriftDiffusion quiet2 =
      duffing_colored_coefficients(table_params(), zero, zero, 0.3);
  CHECK(quiet2.m == doctest::Approx(quiet.m).epsilon(1e-14));
  CHECK(quiet2.sigma_sq == 0.0);

  // Finite-bandwidth excitation on the published set: finite drift,
  // positive diffusion.
  const AutocorrFn r1 = exp_cosine(1.0, 0.7, 1.3);
  const AutocorrFn r2 = exp_cosine(0.8, 0.5, 2.6);
  const DriftDiffusion cc = duffing_colored_coefficients(
      table_params(), r1, r2, 0.5 * table_params().H_crit());
  CHECK(std::isfinite(cc.m));
  CHECK(cc.sigma_sq > 0.0);

  // An autocorrelation that never decays is rejected, as is a negative
  // variance at lag zero.
  const AutocorrFn undamped = [](double s) { return std::cos(0.3 * s); };
  CHECK_THROWS_AS(
      duffing_colored_coefficients(table_params(), undamped, nullptr, 0.3),
      NumericalError);
  const AutocorrFn negative = [](double) { return -1.0; };
  CHECK_THROWS_AS(
      duffing_colored_coefficients(table_params(), negative, nullptr, 0.3),
      ValidationError);
}

TEST_CASE("duffing colored model: entrance boundary and small-energy limits") {
  const DuffingParams p = table_params();
  // Lag kernels with unit spectral normalization: R(s) = v e^{-l|s|} cos(c s)
  // has S(omega) = (v/2pi) [l/(l^2+(omega-c)^2) + l/(l^2+(omega+c)^2)].
  const double v1 = 2.0, l1 = 0.7, c1 = 1.3;
  const double v2 = 1.5, l2 = 0.9, c2 = 2.9;
  const DiffusionModel m =
      duffing_colored_model(p, exp_cosine(v1, l1, c1), exp_cosine(v2, l2, c2));
  CHECK(m.x_l == 0.0);
  CHECK(m.x_c == doctest::Approx((1.0 - 1e-6) * p.H_crit()).epsilon(1e-15));
  CHECK(classify_left_boundary(m) == BoundaryKind::Entrance);

  // At zero energy the drift is pi nu1^2 S1(sqrt(alpha1)) (the additive
  // channel sampled at the natural frequency; damping vanishes).
  const double om = std::sqrt(p.alpha1);
  const auto lorentz = [](double v, double l, double c, double w) {
    return (v / (2.0 * kPi)) *
           (l / (l * l + (w - c) * (w - c)) + l / (l * l + (w + c) * (w + c)));
  };
  const double S1_om = lorentz(v1, l1, c1, om);
  CHECK(m.drift(0.0) ==
        doctest::Approx(kPi * p.nu1 * p.nu1 * S1_om).epsilon(2e-3));

  // sigma^2(H)/H tends to 2 pi nu1^2 S1(sqrt(alpha1)) at the entrance end.
  const double h_small = 1e-8 * p.H_crit();
  CHECK(m.diffusion_sq(h_small) / h_small ==
        doctest::Approx(2.0 * kPi * p.nu1 * p.nu1 * S1_om).epsilon(1e-2));
  CHECK(m.diffusion_sq(0.0) == 0.0);

  // Interior sanity: positive diffusion, finite drift.
  for (double frac : {0.1, 0.35, 0.6, 0.85}) {
    const double H = frac * p.H_crit();
    CHECK(m.diffusion_sq(H) > 0.0);
    CHECK(std::isfinite(m.drift(H)));
  }
}

}  // TEST_SUITE
