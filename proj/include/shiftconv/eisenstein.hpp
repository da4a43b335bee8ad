#ifndef SHIFTCONV_EISENSTEIN_HPP
#define SHIFTCONV_EISENSTEIN_HPP

#include "shiftconv/forms.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

// Cusp a = 1/w for w | N; for square-free N these exhaust the cusps.
struct CuspLabel {
    std::int64_t w = 1;

    void validate(std::int64_t N) const;
};

// Fourier coefficient rho_a(s, m) of the Eisenstein series at cusp a = 1/w by
// its defining Dirichlet sum, gamma-sum truncated at C_max.  For square-free
// N the congruence condition is vacuous and the inner sum is a Ramanujan sum.
TruncatedValue rho_direct(const cplx& s, std::int64_t m, const CuspLabel& cusp, std::int64_t N,
                          std::int64_t C_max);

// Closed form of the same coefficient (square-free N, n != 0):
// (w/N)^s [sum_{d|n,(d,N)=1} d^{1-2s}] / zeta(2s) prod_{p|N}(1-p^{-2s})^{-1}
//   prod_{p|w, p^k||n} [p^{-2s}/(1-p^{-2s+1})](p - p^{k(-2s+1)+1} - 1 + p^{(k+1)(-2s+1)})
cplx rho_closed(const cplx& s, std::int64_t n, const CuspLabel& cusp, std::int64_t N);

// zeta_{a,Q}(s', z) = Q^{-z} zeta(1-2z) sum_{h>=1} rho_a(1/2 - z, -hQ) / h^{s'+z},
// summed termwise with rho_closed.
TruncatedValue zeta_aq_direct(const cplx& sp, const cplx& z, const CuspLabel& cusp,
                              std::int64_t Q, std::int64_t N, std::int64_t H_max);

// Euler-product closed form of zeta_{a,Q}; empty products are 1 and the
// p | w product keeps its alpha = 0 factors.
cplx zeta_aq_closed(const cplx& sp, const cplx& z, const CuspLabel& cusp, std::int64_t Q,
                    std::int64_t N);

// K+-: Res_{z = +-(1-s')} zeta_{a,Q}(s', z) = K+- zeta(2s' - 1), extracted from
// the analytic factorization (the singular zeta factor contributes residue +-1).
cplx k_capital(const cplx& sp, const CuspLabel& cusp, std::int64_t Q, std::int64_t N, char sign);

// k+-: Res_{s' = 1 +- z} zeta_{a,Q}(s', z) = zeta(1 +- 2z) k+-(z), as explicit
// Dirichlet-polynomial products.
cplx k_small(const cplx& z, const CuspLabel& cusp, std::int64_t Q, std::int64_t N, char sign);

} // namespace shiftconv

#endif
