#ifndef SHIFTCONV_QUADRATURE_HPP
#define SHIFTCONV_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "shiftconv/types.hpp"

namespace shiftconv {

struct QuadResult {
    cplx value{0.0, 0.0};
    double err_estimate = 0.0;
    int evaluations = 0;
};

using Integrand = std::function<cplx(double)>;

// Adaptive Gauss-Kronrod 15(7) on a finite interval.
QuadResult integrate_gk(const Integrand& f, double a, double b, const QuadratureSpec& spec);

// Adaptive GK with interior breakpoints (integrand may jump there).
QuadResult integrate_gk_split(const Integrand& f, const std::vector<double>& points,
                              const QuadratureSpec& spec);

// Trapezoidal rule with uniform step on [a,b]; geometric convergence for
// integrands analytic in a strip, which is how all the exp-substituted
// Bessel/Mellin integrals here behave.
cplx integrate_trapezoid(const Integrand& f, double a, double b, int n);

// Gauss-Legendre nodes/weights on [-1,1], cached per n.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

cplx integrate_gl(const Integrand& f, double a, double b, int n);

} // namespace shiftconv

#endif
