#ifndef SHIFTCONV_TEST_ORACLES_HPP
#define SHIFTCONV_TEST_ORACLES_HPP

// Independent reference implementations used only by tests.  Each reimplements
// its target through a different algorithm than the library so that agreement
// is evidence, not tautology.

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
constexpr double ORPI = 3.14159265358979323846264338327950288;

// Spouge's approximation, a = 24; independent of the Lanczos coefficients.
inline cplx gamma_spouge(cplx s) {
    const int a = 24;
    if (s.real() < 0.5)
        return ORPI / (std::sin(ORPI * s) * gamma_spouge(1.0 - s));
    s -= 1.0;
    cplx acc = std::sqrt(2.0 * ORPI);
    double fact = 1.0;
    for (int k = 1; k < a; ++k) {
        double ck = std::pow(double(a - k), k - 0.5) * std::exp(double(a - k)) *
                    ((k - 1) % 2 ? -1.0 : 1.0) / fact;
        acc += ck / (s + double(k));
        fact *= double(k);
    }
    return acc * std::exp(-(s + double(a))) * std::pow(s + double(a), s + 0.5);
}

// K_0 for real argument: ascending series below 2, asymptotic expansion above.
inline double k0_real(double y) {
    const double eg = 0.57721566490153286060651209008240243;
    if (y <= 4.0) {
        double i0 = 1.0, term = 1.0;
        double sum = 0.0, hk = 0.0, termk = 1.0;
        for (int k = 1; k <= 80; ++k) {
            term *= (y * y / 4.0) / (k * k);
            i0 += term;
            hk += 1.0 / k;
            termk *= (y * y / 4.0) / (k * k);
            sum += termk * hk;
        }
        return -(std::log(y / 2.0) + eg) * i0 + sum;
    }
    // asymptotic expansion, truncated at its smallest term
    double s = 1.0, term = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double num = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        double next = term * (-num / (8.0 * k * y));
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    return std::sqrt(ORPI / (2.0 * y)) * std::exp(-y) * s;
}

// Ramanujan tau by direct multiplication of the 24 factors (1-q^n)^24,
// a different route from the library's (eta^3)^8 expansion.
inline std::vector<long long> tau_by_product(int M) {
    std::vector<long long> c(M, 0);
    c[0] = 1;
    for (int n = 1; n < M; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int i = M - 1 - n; i >= 0; --i) {
                c[i + n] -= c[i];
            }
        }
    }
    // tau(m) = coefficient of q^{m-1} in prod (1-q^n)^24
    return c;
}

// Composite Simpson on a finite interval, complex integrand.
template <class F>
cplx simpson(F f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    cplx s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * (h / 3.0);
}

} // namespace oracles

#endif
