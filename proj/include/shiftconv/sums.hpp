#ifndef SHIFTCONV_SUMS_HPP
#define SHIFTCONV_SUMS_HPP



#include <map>
#include <mutex>
#include <vector>

#include "shiftconv/forms.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

// Smooth bump on [1,2]: G(u) = exp(4 - 1/((u-1)(2-u))), peak-normalized to 1
// at u = 3/2; zero outside.  g(s) = int_0^inf G(x) x^{-s} dx/x, so that
// G(x) = (1/2 pi i) int g(s) x^s ds.
struct BumpProfile {
    QuadratureSpec quad;

    double G(double u) const;
    cplx g(const cplx& s) const;

  private:
    mutable std::map<std::pair<double, double>, cplx> cache_;
    mutable std::mutex mu_;
};

// lhs: (1/2 pi i) int_(gamma) Gamma(u) Gamma(beta - u) t^{-u} du by quadrature;
// rhs: Gamma(beta) (1+t)^{-beta}.
std::pair<cplx, cplx> mellin_beta_identity(const cplx& beta, double t, double gamma_line);

// S(x; h) = sum_{l1 m1 = l2 m2 + h} A(m1) B(m2) G(m2/x): exact finite sum.
cplx s_single(double x, const ShiftParams& sp, const CoefficientTable& f,
              const CoefficientTable& g, const BumpProfile& profile);

// Inverse double-Mellin representation of the same sum, D evaluated on the
// line Re s = 2 by its truncated Dirichlet series.
cplx s_single_mellin(double x, const ShiftParams& sp, const CoefficientTable& f,
                     const CoefficientTable& g, const BumpProfile& profile, double gamma_u,
                     std::int64_t M_D = 30000);

// S_Q(x, y) = sum_{l1 m1 = l2 m2 + h Q, h >= 1} A(m1) conj(B(m2)) G1(m1/y) G2(m2/x).
cplx s_double(double x, double y, const ShiftParams& sp, const CoefficientTable& f,
              const CoefficientTable& g, const BumpProfile& g1, const BumpProfile& g2);

// Triple inverse-Mellin representation of S_Q(x,y) with the box-truncated
// Z_Q on the lines (gamma1, gamma2, gamma3) = ((k+1)/2, 1+2e, (k+1)/2+e).
cplx s_double_mellin(double x, double y, const ShiftParams& sp, const CoefficientTable& f,
                     const CoefficientTable& g, const BumpProfile& g1, const BumpProfile& g2,
                     std::int64_t M2_box = 2000, std::int64_t H_box = 2000);

struct ScanRow {
    double x = 0.0;
    std::int64_t h = 1;
    cplx S{0.0, 0.0};
};

struct ScanReport {
    std::vector<ScanRow> rows;
    double slope = 0.0;
    double bootstrap_sd = 0.0;
    int zeros_excluded = 0;
};

// Least-squares slope of log|S| against log x over a geometric x-grid.
ScanReport cancellation_scan(const std::vector<std::int64_t>& hs, const std::vector<double>& xs,
                             bool double_mode, const ShiftParams& sp, const CoefficientTable& f,
                             const CoefficientTable& g, const BumpProfile& profile,
                             std::uint64_t seed = 1);

} // namespace shiftconv

#endif
