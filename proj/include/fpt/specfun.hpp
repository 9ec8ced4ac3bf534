#pragma once

// Special functions needed by the averaged-oscillator coefficient formulas:
// complete elliptic integrals K(k), E(k), the Jacobi elliptic functions
// sn/cn/dn, and the exponential integral Ei(x).
//
// K and E use the arithmetic-geometric mean (AGM) iteration; sn/cn/dn use the
// descending Landen (Gauss) transformation with backward phase recursion
// (Abramowitz & Stegun 16.4, 17.6). Near k = 1 the computations switch to
// complementary-modulus expansions to avoid cancellation. All functions are
// pure and reentrant.

namespace fpt {

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

// Complete elliptic integral of the first kind, modulus convention:
// K(k) = \int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t).  Requires 0 <= k < 1.
double complete_elliptic_K(double k);

// Complete elliptic integral of the second kind:
// E(k) = \int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt.  Requires 0 <= k <= 1.
double complete_elliptic_E(double k);

// Jacobi elliptic functions at argument u, modulus k in [0, 1].
JacobiTriple jacobi_elliptic(double u, double k);

// Exponential integral Ei(x) for x > 0 (principal value form).
double exponential_integral_Ei(double x);

namespace detail {

// K and E computed from the complementary parameter kc2 = 1 - k^2.
// Callers that know kc2 exactly (e.g. oscillator geometry near the
// heteroclinic energy, where 1 - k^2 suffers cancellation when formed from k)
// should use these. Requires 0 < kc2 <= 1.
double elliptic_K_from_kc2(double kc2);
double elliptic_E_from_kc2(double kc2);

}  // namespace detail

}  // namespace fpt
