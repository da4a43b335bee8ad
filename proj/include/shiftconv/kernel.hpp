#ifndef SHIFTCONV_KERNEL_HPP
#define SHIFTCONV_KERNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "shiftconv/types.hpp"

namespace shiftconv {

// The kernel M(s, t, delta) = int_0^inf y^{s-1/2} e^{y(1-delta)} K_{it}(y) dy/y
// in the z = it convention: all entry points below take z with t = z/i.

struct ContourDetour {
    double center = 0.0; // on the real u-axis
    double radius = 0.0;
    bool above = true;   // semicircle passes above (true) or below (false)
};

// A Mellin-Barnes path: up the vertical line Re u = base_abscissa from -i inf,
// across the real-axis region with semicircular detours, then up the line
// Re u = exit_abscissa to +i inf.  With no detours and exit == base this is a
// plain vertical line.
struct ContourPath {
    double base_abscissa = -0.25;
    std::vector<ContourDetour> detours;
    double exit_abscissa = -0.25;
    double crossing_height = 0.0; // Im u of the horizontal run

    void validate() const;
};

struct KernelQuery {
    cplx s{2.0, 0.0};
    cplx z{0.0, 0.0};            // spectral parameter, t = z/i
    double delta = 1.0;
    double continuation_depth = 10.5; // A, non-integer
    std::optional<ContourPath> contour; // auto-built when absent

    void validate() const;
};

enum class KernelRegime { quadrature, hypergeom, barnes, limit };

struct KernelValue {
    cplx value{0.0, 0.0};
    KernelRegime regime = KernelRegime::quadrature;
    double err_estimate = 0.0;
};

// Adaptive quadrature of the defining integral, K evaluated by bessel_k.
// Needs Re s > 1/2 + |Re z| when delta > 0; at delta = 0 additionally
// Re s < 1 (polynomial tail handled by asymptotic correction terms).
KernelValue m_quadrature(const KernelQuery& q, const QuadratureSpec& spec = {});

// Gamma-product times 2F1(s-1/2+z, 1/2+z; s; 1-2/delta).  The defining
// integral requires Re(s +- z) > 1/2; past that the continued 2F1 still
// represents the meromorphic continuation and is used as such.
KernelValue m_hypergeom(const KernelQuery& q);

// Mellin-Barnes contour form; meromorphic continuation to
// Re s > 1/2 - A - |Re z| for |Re z| < 1/4.
KernelValue m_barnes(const KernelQuery& q, const QuadratureSpec& spec = {});

// delta -> 0 limit, valid for Re s <= 1/2 + |Re z| off poles.
cplx m_limit(const cplx& s, const cplx& z);

// Integral over [2 pi h / Y, 2 pi h Y] only.
KernelValue m_truncated(const KernelQuery& q, double Y, std::int64_t h,
                        const QuadratureSpec& spec = {});
// Right-hand side of the truncation estimate with the implied constant 1:
// e^{-2 pi h Y delta} (Yh)^{Re s + A - 2} / (delta (1+|t|)^A)
//   + (h/Y)^{Re s - 1/2 - |Im t|} / (1+|t|)^A.
double prop21_bound(const KernelQuery& q, double Y, std::int64_t h, int A,
                    double implied_constant = 1.0);

// Residue of M(s, z/i, delta) at s = 1/2 + z - l (plus) or s = 1/2 - z - l
// (minus), including the delta-dependent correction terms.
cplx residue_s(const cplx& z, int l, double delta, char sign);
// The delta -> 0 leading term of the same residue.
cplx residue_s_leading(const cplx& z, int l, char sign);

// Laurent data at the double pole s = 1/2 - l when z = 0:
// c2(l) = (2l)!/(2^l (l!)^3), c1(l) = c2(l)(2 Gamma'(1) + 2H_l - psi(1/2+l) - ln 2).
std::pair<double, double> laurent_c(int l);

// Residues in z at z = +-(s + m - 1/2) for Re s within a small window of
// 1/2 - m; which selects R1 (z = 1/2-s-m) or R2 (z = s+m-1/2).
cplx residue_z(const cplx& s, int m, double delta, char which);
cplx residue_z_leading(const cplx& s, int m, char which);

// Circle-contour residue extraction oracle helpers (trapezoid on a circle).
cplx circle_residue_s(const KernelQuery& q0, const cplx& center, double radius, int npoints,
                      const QuadratureSpec& spec = {});

} // namespace shiftconv

#endif
