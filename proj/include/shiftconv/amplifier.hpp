#ifndef SHIFTCONV_AMPLIFIER_HPP
#define SHIFTCONV_AMPLIFIER_HPP

#include <vector>

#include "shiftconv/forms.hpp"
#include "shiftconv/sums.hpp"
#include "shiftconv/types.hpp"

namespace shiftconv {

struct AmplifierConfig {
    std::int64_t Q = 13;
    std::int64_t N0 = 1;
    std::vector<double> x_grid;           // defaults to {Q/8, Q/4, Q/2, Q}
    double L = 0.0;                       // defaults to Q^{1/4} log Q
    std::vector<std::int64_t> prime_list; // defaults to primes in [L, 2L) coprime to Q N0
    std::int64_t chi_index = 1;           // row in dirichlet_characters(Q); 0 is principal

    void finalize(); // fills the defaulted fields
    void validate() const;
};

// B_chi(x) = sum_m A(m) chi(m) G(m/x).
cplx twisted_sum(const std::vector<cplx>& chi, std::int64_t Q, double x,
                 const CoefficientTable& f, const BumpProfile& profile);

// S = sum_psi |B_psi(x)|^2 |sum_l conj(chi(l)) psi(l)|^2 over all psi mod Q.
double amplified_s(const AmplifierConfig& cfg, double x, const CoefficientTable& f,
                   const BumpProfile& profile);

struct ParsevalResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double deviation = 0.0;
};

// Parseval on (Z/QZ)^*: sum_psi |f(psi)|^2 = sum_{(a,Q)=1} |fhat(a)|^2 with
// fhat(a) = phi(Q)^{-1/2} sum_psi f(psi) conj(psi(a)).
ParsevalResult parseval_decompose(const AmplifierConfig& cfg, double x,
                                  const CoefficientTable& f, const BumpProfile& profile);

struct SplitResult {
    double S = 0.0;              // the amplified character-family sum
    double congruence_sum = 0.0; // phi(Q)-weighted congruence double sum (coprime classes)
    cplx S1{0.0, 0.0};           // aggregated diagonal piece over prime pairs
    cplx S2{0.0, 0.0};           // positive shifts
    cplx S3{0.0, 0.0};           // negative shifts
    double assembled = 0.0;      // phi(Q) Re sum chi-weighted (S1+S2+S3), all residues
    double open_squares_deviation = 0.0; // |S - congruence_sum|
};

// Opens the squares in S: verifies the orthogonality identity and computes
// the diagonal/shift split per prime pair; S <= assembled.
SplitResult s123_split(const AmplifierConfig& cfg, double x, const CoefficientTable& f,
                       const BumpProfile& profile);

struct TrendRow {
    std::int64_t Q = 0;
    double x = 0.0;
    double S = 0.0;
    double proxy = 0.0; // Q^{-3/4} sqrt(S)
};

struct TrendReport {
    std::vector<TrendRow> rows;
    double slope = 0.0; // log max-proxy against log Q
};

TrendReport subconvexity_scan(const std::vector<std::int64_t>& q_list,
                              const CoefficientTable& f, const BumpProfile& profile);

} // namespace shiftconv

#endif
