#ifndef SHIFTCONV_POINCARE_HPP
#define SHIFTCONV_POINCARE_HPP

#include <functional>
#include <vector>

#include "shiftconv/forms.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

struct ShiftParams {
    std::int64_t h = 1;
    std::int64_t l1 = 1;
    std::int64_t l2 = 1;
    std::int64_t N0 = 1; // square free
    std::int64_t Q = 1;

    std::int64_t level() const; // N = N0 l1 l2 / gcd(l1, l2)
    void validate() const;
};

struct TruncationWindow {
    double Y = 10.0;
    double delta = 0.5;

    void validate() const;
};

struct UpperHalfPoint {
    double x = 0.0;
    double y = 1.0;
};

// Hyperbolic volume of Gamma_0(N)\H: (pi/3) N prod_{p|N} (1 + 1/p).
double fundamental_volume(std::int64_t N);

// Coset representatives (c, d) of Gamma_inf \ Gamma_0(N) (c = 0 => identity,
// else c > 0, N | c, gcd(c,d) = 1) whose image height y/|cz+d|^2 lies in
// [1/Y, Y].  Sorted by (c, |d|, d).
std::vector<std::pair<std::int64_t, std::int64_t>> coset_reps(std::int64_t N,
                                                              const UpperHalfPoint& z, double Y);

// Finite truncated Poincare series: sum over the window cosets of
// (Im gz)^s exp(-2 pi i h Re gz + 2 pi h (Im gz)(1 - delta)).
cplx poincare_value(const UpperHalfPoint& z, const cplx& s, const ShiftParams& sp,
                    const TruncationWindow& w);

// m-th Fourier coefficient a_{m,Y}(s, y; delta): diagonal term at m = -h plus
// the Kloosterman/oscillatory-integral series over moduli c = N, 2N, ...
// truncated where the window support empties (c > sqrt(Y/y)).
cplx poincare_fourier(std::int64_t m, double y, const cplx& s, const ShiftParams& sp,
                      const TruncationWindow& w, const QuadratureSpec& q = {});

// V(z) = y^k conj(f(l1 z)) g(l2 z), q-expansions truncated at M.
cplx v_product(const UpperHalfPoint& z, const CoefficientTable& f, const CoefficientTable& g,
               std::int64_t l1, std::int64_t l2, std::int64_t M,
               const QuadratureSpec& q = {});

using AutomorphicFn = std::function<cplx(const UpperHalfPoint&)>;

// Petersson inner product (1/V) iint F conj(G) dx dy / y^2 over the level-N
// fundamental region assembled from coset translates of the level-1 domain
// (|x| <= 1/2, |z| >= 1), cut off at y = 12.  grid_n is the Gauss-Legendre
// order per axis.
cplx petersson_inner_fd(const AutomorphicFn& F, const AutomorphicFn& G, std::int64_t N,
                        int grid_n = 48);

// The unfolded form of <P_{h,Y}(., s; delta), V>: incomplete-gamma-weighted
// shifted Dirichlet sum over m2 <= M.
TruncatedValue unfolded_inner(const cplx& s, const ShiftParams& sp, const TruncationWindow& w,
                              const CoefficientTable& f, const CoefficientTable& g,
                              std::int64_t M);

// Coset representatives of Gamma_0(N) \ SL2(Z) (index N prod (1+1/p)).
std::vector<std::array<std::int64_t, 4>> gamma0_coset_reps(std::int64_t N);

// Heuristic tail majorant for sum_{m2 > M} |A(m1) B(m2)| (l2 m2)^{-sigma}
// with the divisor-bound envelope |A(m)| <= d(m).
double deligne_tail_bound(std::int64_t M, double sigma, std::int64_t l1, std::int64_t l2,
                          std::int64_t h, int k);

} // namespace shiftconv

#endif
