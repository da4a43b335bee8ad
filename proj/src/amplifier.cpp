#include "shiftconv/amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shiftconv {

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

void AmplifierConfig::finalize() {
    if (L <= 0.0) L = std::pow(double(Q), 0.25) * std::log(double(Q));
    if (x_grid.empty())
        x_grid = {double(Q) / 8.0, double(Q) / 4.0, double(Q) / 2.0, double(Q)};
    if (prime_list.empty()) {
        for (std::int64_t l = std::int64_t(std::ceil(L)); l < 2.0 * L; ++l) {
            if (!is_prime(l)) continue;
            if (std::gcd(l, Q * N0) != 1) continue;
            prime_list.push_back(l);
        }
    }
}

void AmplifierConfig::validate() const {
    if (Q < 2) throw DomainError("amplifier needs Q >= 2");
    if (prime_list.empty()) throw DomainError("amplifier needs a nonempty prime list");
    for (std::int64_t l : prime_list) {
        if (!is_prime(l)) throw DomainError("amplifier lengths must be prime");
        if (l < L || l >= 2.0 * L) throw DomainError("amplifier primes must lie in [L, 2L)");
        if (std::gcd(l, Q * N0) != 1) throw DomainError("amplifier primes must be coprime to Q N0");
    }
    if (chi_index < 0 || chi_index >= euler_phi(Q)) throw DomainError("chi index out of range");
}

cplx twisted_sum(const std::vector<cplx>& chi, std::int64_t Q, double x,
                 const CoefficientTable& f, const BumpProfile& profile) {
    std::int64_t hi = std::int64_t(std::ceil(2.0 * x));
    if (hi > f.size()) throw GapError("twisted_sum: table too short");
    cplx acc(0.0, 0.0);
    for (std::int64_t m = std::int64_t(std::floor(x)) + 1; m <= hi; ++m) {
        double w = profile.G(double(m) / x);
        if (w == 0.0) continue;
        acc += f.normalized(m) * chi[size_t(m % Q)] * w;
    }
    return acc;
}

namespace {

// per-character data f(psi) = B_psi(x) (sum_l conj(chi(l)) psi(l))
std::vector<cplx> family_values(const AmplifierConfig& cfg, const CharacterTable& chars,
                                double x, const CoefficientTable& f,
                                const BumpProfile& profile) {
    std::vector<cplx> vals(size_t(chars.count()));
    const auto& chi = chars.chi(cfg.chi_index);
    for (std::int64_t j = 0; j < chars.count(); ++j) {
        cplx B = twisted_sum(chars.chi(j), cfg.Q, x, f, profile);
        cplx amp(0.0, 0.0);
        for (std::int64_t l : cfg.prime_list)
            amp += std::conj(chi[size_t(l % cfg.Q)]) * chars.value(j, l);
        vals[size_t(j)] = B * amp;
    }
    return vals;
}

} // namespace

double amplified_s(const AmplifierConfig& cfg, double x, const CoefficientTable& f,
                   const BumpProfile& profile) {
    cfg.validate();
    CharacterTable chars = dirichlet_characters(cfg.Q);
    double acc = 0.0;
    for (const auto& v : family_values(cfg, chars, x, f, profile)) acc += std::norm(v);
    return acc;
}

ParsevalResult parseval_decompose(const AmplifierConfig& cfg, double x,
                                  const CoefficientTable& f, const BumpProfile& profile) {
    cfg.validate();
    CharacterTable chars = dirichlet_characters(cfg.Q);
    auto vals = family_values(cfg, chars, x, f, profile);
    ParsevalResult out;
    for (const auto& v : vals) out.lhs += std::norm(v);
    double phi = double(euler_phi(cfg.Q));
    for (std::int64_t a = 1; a < cfg.Q; ++a) {
        if (std::gcd(a, cfg.Q) != 1) continue;
        cplx fhat(0.0, 0.0);
        for (std::int64_t j = 0; j < chars.count(); ++j)
            fhat += vals[size_t(j)] * std::conj(chars.value(j, a));
        fhat /= std::sqrt(phi);
        out.rhs += std::norm(fhat);
    }
    out.deviation = std::abs(out.lhs - out.rhs);
    return out;
}

SplitResult s123_split(const AmplifierConfig& cfg, double x, const CoefficientTable& f,
                       const BumpProfile& profile) {
    cfg.validate();
    CharacterTable chars = dirichlet_characters(cfg.Q);
    const auto& chi = chars.chi(cfg.chi_index);
    SplitResult out;
    out.S = amplified_s(cfg, x, f, profile);

    std::int64_t hi = std::int64_t(std::ceil(2.0 * x));
    if (hi > f.size()) throw GapError("s123_split: table too short");
    std::int64_t lo = std::int64_t(std::floor(x)) + 1;

    cplx assembled(0.0, 0.0);
    double congr = 0.0;
    for (std::int64_t l1 : cfg.prime_list) {
        for (std::int64_t l2 : cfg.prime_list) {
            cplx weight = std::conj(chi[size_t(l1 % cfg.Q)]) * chi[size_t(l2 % cfg.Q)];
            cplx S1(0.0, 0.0), S2(0.0, 0.0), S3(0.0, 0.0);
            cplx coprime_part(0.0, 0.0);
            for (std::int64_t m1 = lo; m1 <= hi; ++m1) {
                double w1 = profile.G(double(m1) / x);
                if (w1 == 0.0) continue;
                for (std::int64_t m2 = lo; m2 <= hi; ++m2) {
                    std::int64_t diff = l1 * m1 - l2 * m2;
                    if (((diff % cfg.Q) + cfg.Q) % cfg.Q != 0) continue;
                    double w2 = profile.G(double(m2) / x);
                    if (w2 == 0.0) continue;
                    cplx term = f.normalized(m1) * std::conj(f.normalized(m2)) * w1 * w2;
                    if (diff == 0)
                        S1 += term;
                    else if (diff > 0)
                        S2 += term;
                    else
                        S3 += term;
                    if (std::gcd(l1 * m1, cfg.Q) == 1) coprime_part += term;
                }
            }
            out.S1 += weight * S1;
            out.S2 += weight * S2;
            out.S3 += weight * S3;
            assembled += weight * (S1 + S2 + S3);
            congr += (weight * coprime_part).real();
        }
    }
    double phi = double(euler_phi(cfg.Q));
    out.assembled = phi * assembled.real();
    out.congruence_sum = phi * congr;
    out.open_squares_deviation = std::abs(out.S - out.congruence_sum);
    return out;
}

TrendReport subconvexity_scan(const std::vector<std::int64_t>& q_list,
                              const CoefficientTable& f, const BumpProfile& profile) {
    TrendReport rep;
    std::vector<double> lq, lp;
    for (std::int64_t Q : q_list) {
        if (!is_prime(Q)) throw DomainError("subconvexity_scan expects prime moduli");
        AmplifierConfig cfg;
        cfg.Q = Q;
        cfg.finalize();
        if (2.0 * cfg.x_grid.back() > double(f.size()))
            throw ResourceError("subconvexity_scan: coefficient table too short");
        double best = 0.0;
        for (double x : cfg.x_grid) {
            double S = amplified_s(cfg, x, f, profile);
            double proxy = std::pow(double(Q), -0.75) * std::sqrt(S);
            rep.rows.push_back({Q, x, S, proxy});
            best = std::max(best, proxy);
        }
        lq.push_back(std::log(double(Q)));
        lp.push_back(std::log(std::max(best, 1e-300)));
    }
    double n = double(lq.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lq.size(); ++i) {
        sx += lq[i]; sy += lp[i]; sxx += lq[i] * lq[i]; sxy += lq[i] * lp[i];
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

} // namespace shiftconv
