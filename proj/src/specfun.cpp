#include "fpt/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

// AGM iteration shared by K and E. Returns the common limit a_N and
// accumulates sum_{n>=0} 2^{n-1} c_n^2 (with c_0^2 = 1 - kc2) for E.
// Requires 0 < kc2 <= 1.
double agm_with_csum(double kc2, double* c2sum_out) {
  double a = 1.0;
  double b = std::sqrt(kc2);
  double c2sum = 0.5 * (1.0 - kc2);  // 2^{-1} c_0^2
  double pow2 = 0.5;
  for (int n = 0; n < 64 && std::abs(a - b) > 1e-17 * a; ++n) {
    const double c = 0.5 * (a - b);
    const double am = 0.5 * (a + b);
    const double gm = std::sqrt(a * b);
    a = am;
    b = gm;
    pow2 *= 2.0;
    c2sum += pow2 * c * c;
  }
  if (c2sum_out != nullptr) *c2sum_out = c2sum;
  return a;
}

}  // namespace

namespace detail {

double elliptic_K_from_kc2(double kc2) {
  if (!(kc2 > 0.0) || kc2 > 1.0) {
    throw std::domain_error("elliptic_K_from_kc2: kc2 must lie in (0, 1]");
  }
  if (kc2 < 1e-8) {
    // Complementary-modulus expansion: K = ln(4/kc) + (kc2/4)(ln(4/kc) - 1).
    const double kc = std::sqrt(kc2);
    const double L = std::log(4.0 / kc);
    return L + 0.25 * kc2 * (L - 1.0);
  }
  return kPi / (2.0 * agm_with_csum(kc2, nullptr));
}

double elliptic_E_from_kc2(double kc2) {
  if (kc2 < 0.0 || kc2 > 1.0) {
    throw std::domain_error("elliptic_E_from_kc2: kc2 must lie in [0, 1]");
  }
  if (kc2 == 0.0) return 1.0;
  if (kc2 < 1e-8) {
    // E = 1 + (kc2/2)(ln(4/kc) - 1/2) + O(kc2^2 ln kc).
    const double kc = std::sqrt(kc2);
    const double L = std::log(4.0 / kc);
    return 1.0 + 0.5 * kc2 * (L - 0.5);
  }
  double c2sum = 0.0;
  const double aN = agm_with_csum(kc2, &c2sum);
  const double K = kPi / (2.0 * aN);
  return K * (1.0 - c2sum);
}

}  // namespace detail

double complete_elliptic_K(double k) {
  if (!(k >= 0.0) || k >= 1.0) {
    throw std::domain_error("complete_elliptic_K: modulus must lie in [0, 1)");
  }
  return detail::elliptic_K_from_kc2((1.0 - k) * (1.0 + k));
}

double complete_elliptic_E(double k) {
  if (!(k >= 0.0) || k > 1.0) {
    throw std::domain_error("complete_elliptic_E: modulus must lie in [0, 1]");
  }
  if (k == 1.0) return 1.0;
  return detail::elliptic_E_from_kc2((1.0 - k) * (1.0 + k));
}

JacobiTriple jacobi_elliptic(double u, double k) {
  if (!(k >= 0.0) || k > 1.0 || !std::isfinite(u)) {
    throw std::domain_error(
        "jacobi_elliptic: requires finite u and modulus in [0, 1]");
  }
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (k == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  const double kc2 = (1.0 - k) * (1.0 + k);
  if (kc2 < 1e-8) {
    // Near-degenerate modulus: hyperbolic expansion (A&S 16.15) avoids the
    // slow/ill-conditioned Landen descent at k -> 1.
    const double s = std::sinh(u);
    const double c = std::cosh(u);
    const double t = std::tanh(u);
    const double sech = 1.0 / c;
    const double w = s * c - u;
    return {t + 0.25 * kc2 * w / (c * c),
            sech - 0.25 * kc2 * w * t * sech,
            sech + 0.25 * kc2 * (s * c + u) * t * sech};
  }

  // Reduce the argument into [0, K] using the quarter-period symmetries so
  // the backward phase recursion works with small angles.
  const double K = detail::elliptic_K_from_kc2(kc2);
  const double period = 4.0 * K;
  double ur = std::fmod(u, period);
  if (ur < 0.0) ur += period;
  double sgn_sn = 1.0;
  double sgn_cn = 1.0;
  if (ur >= 2.0 * K) {  // sn(u + 2K) = -sn u, cn(u + 2K) = -cn u
    ur -= 2.0 * K;
    sgn_sn = -sgn_sn;
    sgn_cn = -sgn_cn;
  }
  if (ur > K) {  // sn(2K - u) = sn u, cn(2K - u) = -cn u
    ur = 2.0 * K - ur;
    sgn_cn = -sgn_cn;
  }

  // Descending Landen / AGM scale sequence.
  double a_seq[64];
  double c_seq[64];
  double a = 1.0;
  double b = std::sqrt(kc2);
  int N = 0;
  a_seq[0] = a;
  c_seq[0] = k;
  while (N < 62 && std::abs(a_seq[N] - b) > 1e-16 * a_seq[N]) {
    const double an = a_seq[N];
    const double cn1 = 0.5 * (an - b);
    const double am = 0.5 * (an + b);
    const double gm = std::sqrt(an * b);
    ++N;
    a_seq[N] = am;
    c_seq[N] = cn1;
    b = gm;
  }

  // Backward phase recursion: phi_N = 2^N a_N u,
  // phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2.
  double phi = std::ldexp(a_seq[N] * ur, N);
  for (int n = N; n >= 1; --n) {
    const double ratio =
        std::clamp(c_seq[n] / a_seq[n] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(ratio));
  }

  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn >= sqrt(1 - k^2) > 0 for k < 1, so the positive root is always the
  // right branch; this also makes the defining identity exact by construction.
  const double dn = std::sqrt(std::max(0.0, 1.0 - (k * sn) * (k * sn)));
  return {sgn_sn * sn, sgn_cn * cn, dn};
}

double exponential_integral_Ei(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("exponential_integral_Ei: requires x > 0");
  }
  if (x <= 40.0) {
    // Power series Ei(x) = gamma + ln x + sum_{n>=1} x^n / (n * n!).
    // All terms are positive, so there is no cancellation.
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 400; ++n) {
      term *= x / n;
      const double add = term / n;
      sum += add;
      if (add < 1e-18 * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
  }
  // Asymptotic series Ei(x) ~ e^x/x * sum_{n>=0} n!/x^n, truncated at the
  // smallest term (n ~ x); for x > 40 the truncation error is below 1e-16.
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= n / x;
    if (term < 1e-18 * sum) break;
    if (n > x) break;  // smallest-term truncation
    sum += term;
  }
  return std::exp(x) / x * sum;
}

}  // namespace fpt
