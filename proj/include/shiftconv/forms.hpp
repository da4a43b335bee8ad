#ifndef SHIFTCONV_FORMS_HPP
#define SHIFTCONV_FORMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shiftconv/types.hpp"

namespace shiftconv {

struct CuspFormSpec {
    int weight = 12;
    int level = 1;                      // N0, square free
    std::string character_label = "1";  // trivial built-in
    std::string source = "builtin-delta";

    void validate() const;
};

// Fourier coefficients a(m), 1 <= m <= size().  A(m) = a(m) / m^{(k-1)/2}.
struct CoefficientTable {
    CuspFormSpec spec;
    std::vector<cplx> a; // a[0] unused; a[m] is the m-th coefficient

    std::int64_t size() const { return std::int64_t(a.size()) - 1; }
    const cplx& coeff(std::int64_t m) const {
        if (m < 1 || m > size()) throw GapError("coefficient index " + std::to_string(m) + " not in table");
        return a[size_t(m)];
    }
    cplx normalized(std::int64_t m) const; // A(m)
};

// Ramanujan tau through M, exact integers.
std::vector<__int128> delta_tau_exact(std::int64_t M);
CoefficientTable delta_coefficients(std::int64_t M);

CoefficientTable load_coefficients(const std::string& path, const CuspFormSpec& spec);
void save_coefficients(const CoefficientTable& table, const std::string& path);

// S(m,n;c) = sum_{d mod c, (d,c)=1} e(2 pi i (m d + n dbar)/c)
cplx kloosterman(std::int64_t m, std::int64_t n, std::int64_t c);

// sum over d | n (optionally restricted to gcd(d, coprime_to) = 1) of d^nu
cplx divisor_sigma(const cplx& nu, std::int64_t n, std::int64_t coprime_to = 1);

std::int64_t mod_inverse(std::int64_t a, std::int64_t m);
std::vector<std::int64_t> divisors_of(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
bool is_squarefree(std::int64_t n);

struct CharacterTable {
    std::int64_t modulus = 1;
    // characters[j][x] for x in [0, Q); zero at non-units. characters[0] is principal.
    std::vector<std::vector<cplx>> characters;

    std::int64_t count() const { return std::int64_t(characters.size()); }
    const std::vector<cplx>& chi(std::int64_t j) const { return characters.at(size_t(j)); }
    cplx value(std::int64_t j, std::int64_t x) const {
        std::int64_t r = x % modulus;
        if (r < 0) r += modulus;
        return characters.at(size_t(j))[size_t(r)];
    }
};

// All phi(Q) Dirichlet characters mod Q via CRT over prime-power unit groups.
CharacterTable dirichlet_characters(std::int64_t Q);

// d(n), cheap trial division
int divisor_count(std::int64_t n);

} // namespace shiftconv

#endif
