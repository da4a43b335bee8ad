#ifndef SHIFTCONV_SPECFUN_HPP
#define SHIFTCONV_SPECFUN_HPP

#include "shiftconv/types.hpp"

namespace shiftconv {

// Complex gamma via Lanczos (g = 607/128, 15 terms), reflection for Re s < 1/2.
cplx gamma(const cplx& s);
cplx log_gamma(const cplx& s);

// Gamma'(s)/Gamma(s); asymptotic series after shifting Re s up, reflection
// for the left half plane.
cplx digamma(const cplx& s);

// Gamma(s, x) = int_x^inf e^{-y} y^{s-1} dy for complex s, real x >= 0.
// Power series around the lower incomplete function for small x, modified
// Lentz continued fraction for large x.
cplx upper_incomplete_gamma(const cplx& s, double x);

// K_nu(y) for complex order.  Series (Temme's method extended to complex
// order) for y <= 2, exp-substituted trapezoid of the defining integral
// (1/2) int_0^inf exp(-(y/2)(u+1/u)) u^nu du/u otherwise.
cplx bessel_k(const cplx& order, double y, const QuadratureSpec& spec = {});
// e^y K_nu(y); safe for large y where K underflows.
cplx bessel_k_scaled(const cplx& order, double y, const QuadratureSpec& spec = {});

// Gauss 2F1(a,b;c;x).  Power series for |x| <= 0.8; Pfaff x -> x/(x-1) for
// moderate negative x; 1/x connection formula or a Mellin-Barnes line for
// x -> -inf; Gauss summation at x = 1 exactly.  Throws BranchError on the
// cut x in (1, inf).
cplx gauss_2f1(const cplx& a, const cplx& b, const cplx& c, const cplx& x);

// H_n as an exact rational (n up to ~45 before overflow).
Rational harmonic(int n);
double harmonic_d(int n);

// |Im s|^{Re s - 1/2} exp(-(pi/2)|Im s|); requires |Im s| >= 1.
double stirling_envelope(const cplx& s);

// Riemann zeta by Euler-Maclaurin; valid for all complex s != 1.
cplx zeta(const cplx& s);
// Completed zeta pi^{-s/2} Gamma(s/2) zeta(s).
cplx zeta_star(const cplx& s);

bool near_nonpositive_integer(const cplx& s, double tol = 1e-12);

} // namespace shiftconv

#endif
