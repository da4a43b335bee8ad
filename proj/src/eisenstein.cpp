#include "shiftconv/eisenstein.hpp"

#include <cmath>
#include <numeric>

#include "shiftconv/specfun.hpp"

namespace shiftconv {

void CuspLabel::validate(std::int64_t N) const {
    if (w < 1 || N % w != 0) throw DomainError("cusp denominator must divide the level");
}

namespace {

cplx cpow(double base, const cplx& e) { return std::exp(e * std::log(base)); }

// Ramanujan sum c_q(m) by direct summation over primitive residues.
double ramanujan_sum(std::int64_t q, std::int64_t m) {
    if (q == 1) return 1.0;
    std::int64_t mr = m % q;
    if (mr < 0) mr += q;
    double acc = 0.0;
    for (std::int64_t d = 1; d <= q; ++d) {
        if (std::gcd(d, q) != 1) continue;
        acc += std::cos(2.0 * PI * double(mr) * double(d) / double(q));
    }
    return acc;
}

} // namespace

TruncatedValue rho_direct(const cplx& s, std::int64_t m, const CuspLabel& cusp, std::int64_t N,
                          std::int64_t C_max) {
    cusp.validate(N);
    if (s.real() <= 1.0) throw DomainError("rho_direct needs Re s > 1");
    if (C_max < 1) throw DomainError("rho_direct needs C_max >= 1");
    const std::int64_t w = cusp.w, Nw = N / w;
    cplx pref = cpow(double(std::gcd(w, Nw)) / double(w * N), s);
    cplx acc(0.0, 0.0);
    for (std::int64_t g = 1; g <= C_max; ++g) {
        if (std::gcd(g, Nw) != 1) continue;
        double c = ramanujan_sum(g * w, m);
        if (c != 0.0) acc += cpow(double(g), -2.0 * s) * c;
    }
    TruncatedValue out;
    out.value = pref * acc;
    out.truncation = C_max;
    double sig = s.real();
    double cb = (m == 0) ? double(w) * std::pow(double(C_max), 2.0 - 2.0 * sig) / (2.0 * sig - 2.0)
                         : divisor_sigma(cplx(1.0, 0.0), std::llabs(m)).real() *
                               std::pow(double(C_max), 1.0 - 2.0 * sig) / (2.0 * sig - 1.0);
    out.tail_bound = std::abs(pref) * cb;
    if (out.tail_bound > 0.05 * (1.0 + std::abs(out.value)))
        throw ConvergenceError("rho_direct tail too large; raise C_max");
    return out;
}

cplx rho_closed(const cplx& s, std::int64_t n, const CuspLabel& cusp, std::int64_t N) {
    cusp.validate(N);
    if (n == 0) throw DomainError("rho_closed needs n != 0");
    if (!is_squarefree(N)) throw DomainError("rho_closed needs square-free N");
    std::int64_t na = std::llabs(n);
    cplx z2 = zeta(2.0 * s);
    if (std::abs(z2) < 1e-3) throw PoleError("rho_closed too close to a zero of zeta(2s)");
    cplx acc = cpow(double(cusp.w) / double(N), s) * divisor_sigma(1.0 - 2.0 * s, na, N) / z2;
    for (const auto& [p, e] : factorize(N)) acc /= (1.0 - cpow(double(p), -2.0 * s));
    for (const auto& [p, e] : factorize(cusp.w)) {
        int k = 0;
        std::int64_t t = na;
        while (t % p == 0) { t /= p; ++k; }
        cplx u = 1.0 - 2.0 * s;
        cplx den = 1.0 - cpow(double(p), u);
        if (std::abs(den) < 1e-8) throw PoleError("rho_closed local factor pole");
        acc *= cpow(double(p), -2.0 * s) / den *
               (double(p) - cpow(double(p), double(k) * u + 1.0) - 1.0 +
                cpow(double(p), double(k + 1) * u));
    }
    return acc;
}

TruncatedValue zeta_aq_direct(const cplx& sp, const cplx& z, const CuspLabel& cusp,
                              std::int64_t Q, std::int64_t N, std::int64_t H_max) {
    cusp.validate(N);
    if (Q < 1 || H_max < 1) throw DomainError("zeta_aq_direct needs Q, H_max >= 1");
    if ((sp + z).real() <= 1.0 || (sp - z).real() <= 1.0)
        throw DomainError("zeta_aq_direct needs Re(s' +- z) > 1");
    cplx pref = cpow(double(Q), -z) * zeta(1.0 - 2.0 * z);
    cplx acc(0.0, 0.0);
    for (std::int64_t h = 1; h <= H_max; ++h)
        acc += rho_closed(0.5 - z, -h * Q, cusp, N) * cpow(double(h), -(sp + z));
    TruncatedValue out;
    out.value = pref * acc;
    out.truncation = H_max;
    // |rho_closed(1/2 - z, n)| <= d(n) n^{2|Re z|} x bounded local products
    double ex = (sp + z).real() - 0.25 - 2.0 * std::abs(z.real());
    out.tail_bound = (ex <= 1.0)
                         ? 1e30
                         : std::abs(pref) * 50.0 *
                               std::pow(double(Q), 2.0 * std::abs(z.real())) *
                               std::pow(double(H_max), 1.0 - ex) / (ex - 1.0);
    if (out.tail_bound > 0.1 * (1.0 + std::abs(out.value)))
        throw ConvergenceError("zeta_aq_direct tail too large; raise H_max");
    return out;
}

namespace {

// the product part of zeta_aq_closed (everything except zeta(s'+z) zeta(s'-z))
cplx zeta_aq_products(const cplx& sp, const cplx& z, const CuspLabel& cusp, std::int64_t Q,
                      std::int64_t N) {
    const std::int64_t Nw = N / cusp.w;
    cplx acc = cpow(1.0 / double(Nw), 0.5 - z) * cpow(double(Q), -z);
    for (const auto& [p, e] : factorize(N)) acc /= (1.0 - cpow(double(p), -1.0 + 2.0 * z));
    for (const auto& [p, e] : factorize(Nw)) acc *= (1.0 - cpow(double(p), -(sp - z)));
    const bool z_zero = (z == cplx(0.0, 0.0));
    for (const auto& [p, e] : factorize(cusp.w)) {
        int alpha = 0;
        std::int64_t t = Q;
        while (t % p == 0) { t /= p; ++alpha; }
        double dp = double(p);
        if (z_zero) {
            // l'Hopital limit of the 0/0 local factor at z = 0
            cplx ps = cpow(dp, -sp);
            acc *= (1.0 / dp) *
                   ((dp - 1.0) * ps - (1.0 - ps) * (1.0 + double(alpha) * (1.0 - dp)));
            continue;
        }
        cplx den = 1.0 - cpow(dp, 2.0 * z);
        if (std::abs(den) < 1e-8) throw PoleError("zeta_aq_closed local factor pole at p | w");
        acc *= cpow(dp, -1.0 + 2.0 * z) / den *
               ((dp - 1.0) * (1.0 - cpow(dp, -(sp - z))) +
                cpow(dp, double(alpha) * 2.0 * z) * (cpow(dp, 2.0 * z) - dp) *
                    (1.0 - cpow(dp, -(sp + z))));
    }
    for (const auto& [q, e] : factorize(Q)) {
        if (N % q == 0) continue;
        double dq = double(q);
        if (z_zero) {
            cplx qs = cpow(dq, -sp);
            acc *= qs + double(e + 1) * (1.0 - qs);
            continue;
        }
        cplx den = 1.0 - cpow(dq, 2.0 * z);
        if (std::abs(den) < 1e-8) throw PoleError("zeta_aq_closed local factor pole at q | Q");
        acc *= (1.0 / den) * ((1.0 - cpow(dq, -(sp - z))) -
                              cpow(dq, double(e + 1) * 2.0 * z) * (1.0 - cpow(dq, -(sp + z))));
    }
    return acc;
}

} // namespace

cplx zeta_aq_closed(const cplx& sp, const cplx& z, const CuspLabel& cusp, std::int64_t Q,
                    std::int64_t N) {
    cusp.validate(N);
    if (Q < 1) throw DomainError("zeta_aq_closed needs Q >= 1");
    if (!is_squarefree(N)) throw DomainError("zeta_aq_closed needs square-free N");
    return zeta(sp + z) * zeta(sp - z) * zeta_aq_products(sp, z, cusp, Q, N);
}

cplx k_capital(const cplx& sp, const CuspLabel& cusp, std::int64_t Q, std::int64_t N, char sign) {
    cusp.validate(N);
    if (std::abs(sp - 1.0) < 1e-8) throw PoleError("k_capital undefined at s' = 1");
    if (sign == '+') {
        // pole of zeta(s'+z) at z = 1-s' (residue +1); zeta(s'-z) -> zeta(2s'-1)
        return zeta_aq_products(sp, 1.0 - sp, cusp, Q, N);
    }
    if (sign != '-') throw DomainError("k_capital sign must be '+' or '-'");
    // pole of zeta(s'-z) at z = s'-1 has residue -1 in z
    return -zeta_aq_products(sp, sp - 1.0, cusp, Q, N);
}

cplx k_small(const cplx& z, const CuspLabel& cusp, std::int64_t Q, std::int64_t N, char sign) {
    cusp.validate(N);
    const std::int64_t Nw = N / cusp.w;
    cplx acc = cpow(1.0 / double(Nw), 0.5 - z) * cpow(double(Q), -z);
    auto alpha_of = [&](std::int64_t p) {
        int a = 0;
        std::int64_t t = Q;
        while (t % p == 0) { t /= p; ++a; }
        return a;
    };
    if (sign == '+') {
        for (const auto& [p, e] : factorize(N)) acc /= (1.0 - cpow(double(p), -1.0 + 2.0 * z));
        for (const auto& [p, e] : factorize(Nw)) acc *= (1.0 - 1.0 / double(p));
        for (const auto& [p, e] : factorize(cusp.w)) {
            double dp = double(p);
            int alpha = alpha_of(p);
            cplx den = 1.0 - cpow(dp, 2.0 * z);
            if (std::abs(den) < 1e-8) throw PoleError("k_small local factor pole");
            acc *= cpow(dp, -1.0 + 2.0 * z) / den *
                   ((dp - 1.0) * (1.0 - 1.0 / dp) +
                    cpow(dp, double(alpha) * 2.0 * z) * (cpow(dp, 2.0 * z) - dp) *
                        (1.0 - cpow(dp, -(1.0 + 2.0 * z))));
        }
        for (const auto& [q, e] : factorize(Q)) {
            if (N % q == 0) continue;
            double dq = double(q);
            cplx den = 1.0 - cpow(dq, 2.0 * z);
            if (std::abs(den) < 1e-8) throw PoleError("k_small local factor pole");
            acc *= (1.0 / den) * ((1.0 - 1.0 / dq) -
                                  cpow(dq, double(e + 1) * 2.0 * z) *
                                      (1.0 - cpow(dq, -(1.0 + 2.0 * z))));
        }
        return acc;
    }
    if (sign != '-') throw DomainError("k_small sign must be '+' or '-'");
    for (const auto& [p, e] : factorize(cusp.w)) {
        double dp = double(p);
        int alpha = alpha_of(p);
        cplx den = 1.0 - cpow(dp, 2.0 * z);
        if (std::abs(den) < 1e-8) throw PoleError("k_small local factor pole");
        acc *= cpow(dp, -1.0 + 2.0 * z) / den * (dp - 1.0) *
               (1.0 - cpow(dp, double(alpha) * 2.0 * z));
    }
    for (const auto& [q, e] : factorize(Q)) {
        if (N % q == 0) continue;
        double dq = double(q);
        cplx den = 1.0 - cpow(dq, 2.0 * z);
        if (std::abs(den) < 1e-8) throw PoleError("k_small local factor pole");
        acc *= (1.0 / den) * ((1.0 - cpow(dq, -(1.0 - 2.0 * z))) -
                              cpow(dq, double(e + 1) * 2.0 * z) * (1.0 - 1.0 / dq));
    }
    return acc;
}

} // namespace shiftconv
