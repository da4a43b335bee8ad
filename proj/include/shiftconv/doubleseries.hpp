#ifndef SHIFTCONV_DOUBLESERIES_HPP
#define SHIFTCONV_DOUBLESERIES_HPP

#include <optional>

#include "shiftconv/dseries.hpp"
#include "shiftconv/forms.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

struct ZqQuery {
    cplx s{2.0, 0.0};
    cplx w{2.0, 0.0};
    ShiftParams sp; // carries Q
    const CoefficientTable* f = nullptr;
    const CoefficientTable* g = nullptr;
    std::int64_t M2_max = 1000;
    std::int64_t H_max = 1000;

    // s' = s + w + k/2 - 1, recomputed on access
    cplx s_prime() const;
    void validate() const;
};

// Box-truncated Z_Q(s, w) = sum over l1 m1 = l2 m2 + h0 Q of
// A(m1) conj(B(m2)) (1 + h0 Q/(l2 m2))^{(k-1)/2} (l2 m2)^{-s} (h0 Q)^{-w-(k-1)/2}.
TruncatedValue zq_truncated(const ZqQuery& q);

// L_Q(s', conj u_j) = sum_{h0 <= H_max} conj(rho_j(-h0 Q)) / (h0 Q)^{s'}.
TruncatedValue l_q(const cplx& sp, const SpectralDatum& datum, std::int64_t Q,
                   std::int64_t H_max);

// The cut/congruence decomposition on the common rectangle
// m1 <= M1, m2 <= M2 (M1 derived from the query box). All S3..S8 carry the
// binomial weight index j; S1/S2 carry the original Z_Q weights.
struct SPieces {
    cplx S1{0.0, 0.0}; // l2 m2 >= h0 Q part of the Z_Q box sum
    cplx S2{0.0, 0.0}; // l2 m2 <  h0 Q part
    cplx S3{0.0, 0.0}; // j-weighted sum over the S2 index set
    cplx S4{0.0, 0.0}; // binomial tail S2 - sum_{j' <= K} C(j') S3(j')
    cplx S5{0.0, 0.0}; // full congruence sum on the rectangle
    cplx S6{0.0, 0.0}; // positive shifts with l2 m2 >= h0 Q
    cplx S7{0.0, 0.0}; // negative shifts
    cplx S8{0.0, 0.0}; // zero shift l1 m1 = l2 m2
    int K = 0;
    double binom_tail_bound = 0.0;
};

SPieces s_decomposition(const ZqQuery& q, int j);

// S8 in factored form: sum over (m, l1 l2) = 1 times the l-part sum,
// l = l1 l2 / (l1, l2)^2.
cplx s8_factored(const ZqQuery& q, int j);

struct SieveReport {
    double mobius_deviation = 0.0;    // S5(Q) vs sum_{d|Q} scaled S5'(Q/d)
    double character_deviation = 0.0; // S5'(Q) vs the chi-averaged L-products
};

SieveReport s5_sieve_check(const ZqQuery& q, int j);

// Residue of Z_Q on the emergent polar line w + 2s + k/2 = 5/2 - l,
// assembled from K+-(3/2 - s - l) and the Rankin-Selberg inner products.
// K overrides let tests freeze the K factors.
cplx sprime_residue(const cplx& s, int l, const ShiftParams& sp, const CoefficientTable& f,
                    const CoefficientTable& g, std::int64_t M = 4000,
                    std::optional<cplx> k_plus_override = std::nullopt,
                    std::optional<cplx> k_minus_override = std::nullopt);

// Continuous-spectrum representation of Z_Q at level 1 (integral part plus
// the Psi correction terms); the cuspidal part is analytic in w and is not
// included.  Used as the contour oracle for sprime_residue.
cplx zq_spectral_cont(const cplx& s, const cplx& w, const ShiftParams& sp,
                      const CoefficientTable& f, const CoefficientTable& g, std::int64_t M);

// B_A(s) = prod_{l=0}^{[A]} zeta(2s+2l) (s + l - 1/2)^2.
cplx b_a_polyfactor(const cplx& s, double A);

} // namespace shiftconv

#endif
