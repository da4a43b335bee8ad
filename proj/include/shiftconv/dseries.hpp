#ifndef SHIFTCONV_DSERIES_HPP
#define SHIFTCONV_DSERIES_HPP

#include <map>
#include <string>
#include <vector>

#include "shiftconv/forms.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

struct DSeriesQuery {
    cplx s{2.0, 0.0};
    ShiftParams sp;
    double delta = 0.0;
    std::int64_t M = 1000;
    const CoefficientTable* f = nullptr;
    const CoefficientTable* g = nullptr;

    void validate() const;
};

// One ingested Maass-form record: spectral parameter t_j, coefficients
// rho_j(-h) keyed by h, and the triple product <V, u_j>.
struct SpectralDatum {
    cplx t_j{0.0, 0.0};
    std::map<std::int64_t, cplx> rho_minus_h;
    cplx inner_Vu{0.0, 0.0};
};

// UTF-8 lines `t_re t_im h rho_re rho_im innerV_re innerV_im`, '#' comments.
std::vector<SpectralDatum> load_spectral_data(const std::string& path);

// Partial sum of D(s; h, delta) over m2 <= M with a divisor-envelope tail.
TruncatedValue d_truncated(const DSeriesQuery& q);

// conj<V, E*(., w)> at level 1: Dirichlet-series route for Re w > 1.1,
// fundamental-domain quadrature against the completed Eisenstein expansion
// otherwise (valid for all w off the poles w = 0, 1).
TruncatedValue rankin_selberg_inner(const cplx& w, const CoefficientTable& f,
                                    const CoefficientTable& g, std::int64_t M,
                                    int fd_grid = 28);

struct OmegaTerm {
    int l = 0;
    cplx first{0.0, 0.0};   // pi^{1-s-l} h^{1-2s-l} ... <V, E*(., s+l)> piece
    cplx second{0.0, 0.0};  // mirror piece, dropped at sigma = 1/2 - l exactly
    cplx gamma_factor{1.0, 0.0};
};

struct OmegaResult {
    cplx value{0.0, 0.0};
    std::vector<OmegaTerm> terms;
};

// The finite cusp/l correction sum Omega(s; h); zero for Re s >= 1/2.
// Level 1 built in; other levels need externally supplied cusp data.
OmegaResult omega(const cplx& s, const ShiftParams& sp, const CoefficientTable& f,
                  const CoefficientTable& g, std::int64_t M);

struct DSpectralResult {
    cplx value{0.0, 0.0};
    bool continuous_only = false; // set when no cuspidal data was supplied
};

// Spectral evaluation of D(s;h) for 1/2 - A < Re s < 1/2 - k/2: cuspidal sum
// over ingested data + continuous z-integral + Omega.
DSpectralResult d_spectral(const cplx& s, const ShiftParams& sp,
                           const std::vector<SpectralDatum>& spectral,
                           const CoefficientTable& f, const CoefficientTable& g, std::int64_t M,
                           double continuation_depth = 10.5);

} // namespace shiftconv

#endif
