#include "shiftconv/doubleseries.hpp"

#include <cmath>
#include <numeric>

#include "shiftconv/eisenstein.hpp"
#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"

namespace shiftconv {

cplx ZqQuery::s_prime() const {
    if (!f) throw DomainError("zq query needs tables");
    return s + w + 0.5 * double(f->spec.weight) - 1.0;
}

void ZqQuery::validate() const {
    sp.validate();
    if (!f || !g) throw DomainError("zq query needs coefficient tables");
    if (f->spec.weight != g->spec.weight) throw DomainError("weights must agree");
    if (M2_max < 1 || H_max < 1) throw DomainError("zq box must be nonempty");
}

namespace {

cplx cpowi(std::int64_t base, const cplx& e) { return std::exp(e * std::log(double(base))); }

} // namespace

TruncatedValue zq_truncated(const ZqQuery& q) {
    q.validate();
    const auto& sp = q.sp;
    const int k = q.f->spec.weight;
    const double half_km1 = 0.5 * double(k - 1);
    std::int64_t m1_needed = (sp.l2 * q.M2_max + q.H_max * sp.Q) / sp.l1 + 1;
    if (m1_needed > q.f->size() || q.M2_max > q.g->size())
        throw GapError("zq_truncated: coefficient tables too short");

    std::vector<cplx> m2pow(size_t(q.M2_max) + 1);
    for (std::int64_t m2 = 1; m2 <= q.M2_max; ++m2)
        m2pow[size_t(m2)] = cpowi(sp.l2 * m2, -q.s);
    std::vector<cplx> hpow(size_t(q.H_max) + 1);
    for (std::int64_t h0 = 1; h0 <= q.H_max; ++h0)
        hpow[size_t(h0)] = std::exp(-(q.w + half_km1) * std::log(double(h0 * sp.Q)));

    cplx acc(0.0, 0.0);
    for (std::int64_t h0 = 1; h0 <= q.H_max; ++h0) {
        for (std::int64_t m2 = 1; m2 <= q.M2_max; ++m2) {
            std::int64_t num = sp.l2 * m2 + h0 * sp.Q;
            if (num % sp.l1 != 0) continue;
            std::int64_t m1 = num / sp.l1;
            double ratio = 1.0 + double(h0 * sp.Q) / double(sp.l2 * m2);
            acc += q.f->normalized(m1) * std::conj(q.g->normalized(m2)) *
                   std::pow(ratio, half_km1) * m2pow[size_t(m2)] * hpow[size_t(h0)];
        }
    }
    TruncatedValue out;
    out.value = acc;
    out.truncation = q.M2_max;
    // crude two-sided divisor-envelope tail
    double sig_s = q.s.real(), sig_w = q.w.real() + half_km1;
    double tm = (sig_s > 1.5) ? std::pow(double(q.M2_max), 1.5 - sig_s) / (sig_s - 1.5) : 1e30;
    double th = (sig_w > 1.5) ? std::pow(double(q.H_max), 1.5 - sig_w) / (sig_w - 1.5) : 1e30;
    out.tail_bound = 72.0 * std::pow(2.0, half_km1) * (tm + th);
    return out;
}

TruncatedValue l_q(const cplx& sp, const SpectralDatum& datum, std::int64_t Q,
                   std::int64_t H_max) {
    if (H_max < 1 || Q < 1) throw DomainError("l_q needs positive Q, H_max");
    if (datum.rho_minus_h.empty()) throw NoDataError("spectral datum has no coefficients");
    cplx acc(0.0, 0.0);
    for (std::int64_t h0 = 1; h0 <= H_max; ++h0) {
        auto it = datum.rho_minus_h.find(h0 * Q);
        if (it == datum.rho_minus_h.end())
            throw NoDataError("l_q: rho(-h0 Q) missing for h0 = " + std::to_string(h0));
        acc += std::conj(it->second) * std::exp(-sp * std::log(double(h0 * Q)));
    }
    TruncatedValue out;
    out.value = acc;
    out.truncation = H_max;
    out.tail_bound = 0.0; // data-limited; no extrapolated tail
    return out;
}

namespace {

struct Rect {
    std::int64_t M1, M2;
};

Rect rect_of(const ZqQuery& q) {
    std::int64_t M1 = (q.sp.l2 * q.M2_max + q.H_max * q.sp.Q) / q.sp.l1;
    M1 = std::min(M1, q.f->size());
    return {M1, std::min(q.M2_max, q.g->size())};
}

// j-weight a(m1) conj(b(m2)) / (m2^{s+k-1-j} m1^{w+(k-1)/2+j})
cplx jweight(const ZqQuery& q, std::int64_t m1, std::int64_t m2, int j) {
    const int k = q.f->spec.weight;
    return q.f->coeff(m1) * std::conj(q.g->coeff(m2)) *
           cpowi(m2, -(q.s + double(k - 1 - j))) *
           cpowi(m1, -(q.w + 0.5 * double(k - 1) + double(j)));
}

cplx binom_coeff(const cplx& a, int j) {
    // binomial coefficient C(a, j) = a (a-1) ... (a-j+1) / j!
    cplx c(1.0, 0.0);
    for (int i = 0; i < j; ++i) c *= (a - double(i)) / double(i + 1);
    return c;
}

} // namespace

SPieces s_decomposition(const ZqQuery& q, int j) {
    q.validate();
    if (j < 0) throw DomainError("s_decomposition needs j >= 0");
    const auto& sp = q.sp;
    const int k = q.f->spec.weight;
    const double half_km1 = 0.5 * double(k - 1);
    if ((q.s + q.w + 0.5 * double(k)).real() <= 2.5)
        throw DomainError("s_decomposition needs Re(s + w + k/2) > 5/2");
    SPieces out;
    out.K = std::max(0, int(std::ceil(1.1 - q.w.real())));
    Rect r = rect_of(q);

    // S1/S2: the weighted Z_Q box split by the cut l2 m2 < h0 Q
    for (std::int64_t h0 = 1; h0 <= q.H_max; ++h0) {
        for (std::int64_t m2 = 1; m2 <= q.M2_max; ++m2) {
            std::int64_t num = sp.l2 * m2 + h0 * sp.Q;
            if (num % sp.l1 != 0) continue;
            std::int64_t m1 = num / sp.l1;
            if (m1 > q.f->size()) throw GapError("s_decomposition: f table too short");
            double ratio = 1.0 + double(h0 * sp.Q) / double(sp.l2 * m2);
            cplx term = q.f->normalized(m1) * std::conj(q.g->normalized(m2)) *
                        std::pow(ratio, half_km1) * cpowi(sp.l2 * m2, -q.s) *
                        std::exp(-(q.w + half_km1) * std::log(double(h0 * sp.Q)));
            if (sp.l2 * m2 < h0 * sp.Q)
                out.S2 += term;
            else
                out.S1 += term;
        }
    }

    // congruence pieces at the given j over the common rectangle
    for (std::int64_t m2 = 1; m2 <= r.M2; ++m2) {
        for (std::int64_t mm1 = 1; mm1 <= r.M1; ++mm1) {
            std::int64_t diff = sp.l1 * mm1 - sp.l2 * m2;
            if (((diff % sp.Q) + sp.Q) % sp.Q != 0) continue;
            cplx term = jweight(q, mm1, m2, j);
            out.S5 += term;
            if (diff == 0) {
                out.S8 += term;
            } else if (diff < 0) {
                out.S7 += term;
            } else if (sp.l2 * m2 >= diff) { // h0 Q = diff <= l2 m2
                out.S6 += term;
            } else {
                out.S3 += term;
            }
        }
    }

    // binomial reassembly tail: S4 = S2 - prefactor sum_{j' <= K} C(j') S3(j');
    // the per-pair identity (h0 Q)^{-w-(k-1)/2} = (l1 m1)^{-w-(k-1)/2}
    //   sum_j C(-(w+(k-1)/2), j) (-l2 m2/(l1 m1))^j fixes the prefactor
    cplx assembled(0.0, 0.0);
    cplx pref = cpowi(sp.l1 * sp.l2, cplx(half_km1, 0.0)) *
                cpowi(sp.l2, -(q.s + double(k - 1))) *
                cpowi(sp.l1, -(q.w + half_km1));
    for (int jp = 0; jp <= out.K; ++jp) {
        cplx S3jp(0.0, 0.0);
        for (std::int64_t m2 = 1; m2 <= r.M2; ++m2) {
            for (std::int64_t mm1 = 1; mm1 <= r.M1; ++mm1) {
                std::int64_t diff = sp.l1 * mm1 - sp.l2 * m2;
                if (diff <= 0) continue;
                if (((diff % sp.Q) + sp.Q) % sp.Q != 0) continue;
                if (sp.l2 * m2 >= diff) continue;
                // restrict to the Z_Q box image to compare against S2
                std::int64_t h0 = diff / sp.Q;
                if (h0 > q.H_max || m2 > q.M2_max) continue;
                S3jp += jweight(q, mm1, m2, jp);
            }
        }
        assembled += binom_coeff(-(q.w + half_km1), jp) *
                     std::pow(cplx(-double(sp.l2), 0.0) / double(sp.l1), double(jp)) * S3jp;
    }
    out.S4 = out.S2 - pref * assembled;
    // first-omitted-term bound: per-pair ratio l2 m2 / (l1 m1) < 1/2 on the cut
    out.binom_tail_bound =
        std::abs(binom_coeff(-(q.w + half_km1), out.K + 1)) * std::pow(0.5, out.K + 1) *
        std::abs(pref) * 2.0 *
        (std::abs(out.S2) + 1.0);
    return out;
}

cplx s8_factored(const ZqQuery& q, int j) {
    q.validate();
    const auto& sp = q.sp;
    const int k = q.f->spec.weight;
    // the diagonal l1 m1 = l2 m2 is m1 = a t, m2 = b t with a = l2/(l1,l2),
    // b = l1/(l1,l2); splitting t = t0 r with (t0, l1 l2) = 1 and r supported
    // on the primes of l1 l2 factors the sum (Hecke multiplicativity)
    std::int64_t gg = std::gcd(sp.l1, sp.l2);
    std::int64_t a = sp.l2 / gg, b = sp.l1 / gg;
    cplx E = q.s + q.w + 0.5 * double(k - 1);
    cplx pref = cpowi(a, -(q.w + double(j))) *
                cpowi(b, -(q.s + 0.5 * double(k - 1) - double(j)));
    std::int64_t cap_t = std::min(q.f->size() / a, q.g->size() / b);
    cplx coprime_sum(0.0, 0.0), r_sum(0.0, 0.0);
    for (std::int64_t m = 1; m <= cap_t; ++m) {
        if (std::gcd(m, sp.l1 * sp.l2) != 1) continue;
        coprime_sum += q.f->normalized(m) * std::conj(q.g->normalized(m)) * cpowi(m, -E);
    }
    for (std::int64_t rr = 1; rr <= cap_t; ++rr) {
        std::int64_t t = rr;
        for (const auto& [p, e] : factorize(sp.l1 * sp.l2))
            while (t % p == 0) t /= p;
        if (t != 1) continue; // r must divide (l1 l2)^inf
        r_sum += q.f->normalized(a * rr) * std::conj(q.g->normalized(b * rr)) * cpowi(rr, -E);
    }
    return pref * coprime_sum * r_sum;
}

SieveReport s5_sieve_check(const ZqQuery& q, int j) {
    q.validate();
    const auto& sp = q.sp;
    if (sp.Q > 1 && std::gcd(sp.l1 * sp.l2, sp.Q) != 1)
        throw DomainError("sieve check needs gcd(l1 l2, Q) = 1");
    Rect r = rect_of(q);
    SieveReport rep;

    auto s5_full = [&](std::int64_t Qmod) {
        cplx acc(0.0, 0.0);
        for (std::int64_t m2 = 1; m2 <= r.M2; ++m2) {
            for (std::int64_t m1 = 1; m1 <= r.M1; ++m1) {
                std::int64_t diff = sp.l1 * m1 - sp.l2 * m2;
                if (((diff % Qmod) + Qmod) % Qmod != 0) continue;
                acc += jweight(q, m1, m2, j);
            }
        }
        return acc;
    };
    // scaled S5'(Q/d): pairs (d m1', d m2') with (m2', Q/d) = 1 and the
    // congruence mod Q/d, weights at the original indices
    auto s5p_scaled = [&](std::int64_t Qd, std::int64_t d) {
        cplx acc(0.0, 0.0);
        for (std::int64_t m2 = 1; m2 * d <= r.M2; ++m2) {
            if (Qd > 1 && std::gcd(m2, Qd) != 1) continue;
            for (std::int64_t m1 = 1; m1 * d <= r.M1; ++m1) {
                std::int64_t diff = sp.l1 * m1 - sp.l2 * m2;
                if (Qd > 1 && ((diff % Qd) + Qd) % Qd != 0) continue;
                acc += jweight(q, m1 * d, m2 * d, j);
            }
        }
        return acc;
    };
    cplx lhs = s5_full(sp.Q);
    cplx rhs(0.0, 0.0);
    for (std::int64_t d : divisors_of(sp.Q)) rhs += s5p_scaled(sp.Q / d, d);
    rep.mobius_deviation = std::abs(lhs - rhs);

    // character form of S5'(Q)
    cplx s5p = s5p_scaled(sp.Q, 1);
    CharacterTable chars = dirichlet_characters(sp.Q);
    const int k = q.f->spec.weight;
    cplx chi_acc(0.0, 0.0);
    for (std::int64_t ci = 0; ci < chars.count(); ++ci) {
        cplx Lf(0.0, 0.0), Lg(0.0, 0.0);
        for (std::int64_t m1 = 1; m1 <= r.M1; ++m1)
            Lf += q.f->coeff(m1) * chars.value(ci, m1) *
                  cpowi(m1, -(q.w + 0.5 * double(k - 1) + double(j)));
        for (std::int64_t m2 = 1; m2 <= r.M2; ++m2)
            Lg += std::conj(q.g->coeff(m2)) * std::conj(chars.value(ci, m2)) *
                  cpowi(m2, -(q.s + double(k - 1 - j)));
        chi_acc += chars.value(ci, sp.l1) * std::conj(chars.value(ci, sp.l2)) * Lf * Lg;
    }
    chi_acc /= double(euler_phi(sp.Q));
    rep.character_deviation = std::abs(s5p - chi_acc);
    return rep;
}

cplx sprime_residue(const cplx& s, int l, const ShiftParams& sp, const CoefficientTable& f,
                    const CoefficientTable& g, std::int64_t M,
                    std::optional<cplx> k_plus_override, std::optional<cplx> k_minus_override) {
    sp.validate();
    if (sp.level() != 1) throw UnsupportedError("sprime_residue: level-1 data path only");
    if (l < 0) throw DomainError("sprime_residue needs l >= 0");
    const int k = f.spec.weight;
    cplx sprime = 1.5 - s - double(l);
    CuspLabel cusp{1};
    cplx Kp = k_plus_override ? *k_plus_override : k_capital(sprime, cusp, sp.Q, 1, '+');
    cplx Km = k_minus_override ? *k_minus_override : k_capital(sprime, cusp, sp.Q, 1, '-');
    double lf = 1.0;
    for (int i = 2; i <= l; ++i) lf *= i;
    cplx zs = zeta_star(2.0 * s + 2.0 * double(l));
    if (std::abs(zs) < 1e-6) throw PoleError("sprime_residue near a zeta* zero");
    cplx g1 = gamma(1.0 - s - double(l));
    cplx core = fundamental_volume(1) * (l % 2 ? -1.0 : 1.0) *
                gamma(2.0 * s + double(l) - 1.0) *
                std::exp(-(1.5 - s - double(l)) * std::log(double(sp.Q))) /
                (lf * std::exp((s + double(l) - 1.0) * std::log(PI)) * zs *
                 gamma(s + double(l)) * g1 * g1);
    cplx rs_plus = rankin_selberg_inner(s + double(l), f, g, M).value;
    cplx rs_minus = rankin_selberg_inner(1.0 - s - double(l), f, g, M).value;
    return std::exp(double(k) * std::log(4.0 * PI)) * gamma(1.0 - s) /
           (2.0 * gamma(s + double(k - 1))) * core * (Kp * rs_plus + Km * rs_minus);
}

cplx zq_spectral_cont(const cplx& s, const cplx& w, const ShiftParams& sp,
                      const CoefficientTable& f, const CoefficientTable& g, std::int64_t M) {
    sp.validate();
    if (sp.level() != 1) throw UnsupportedError("zq_spectral_cont: level-1 only");
    const int k = f.spec.weight;
    const cplx sprime = s + w + 0.5 * double(k) - 1.0;
    const double V = fundamental_volume(1);
    CuspLabel cusp{1};
    cplx lead = std::exp(double(k) * std::log(4.0 * PI)) * gamma(1.0 - s) /
                (2.0 * gamma(s + double(k - 1)));

    // integral part along z = i tau
    QuadratureSpec spec;
    spec.abs_tol = 1e-9;
    spec.rel_tol = 1e-7;
    auto integrand = [&](double tau) {
        if (std::abs(tau) < 1e-9) return cplx(0.0, 0.0);
        cplx z(0.0, tau);
        cplx num = V * std::exp(-sprime * std::log(double(sp.Q))) *
                   zeta_aq_closed(sprime, z, cusp, sp.Q, 1) * gamma(s - 0.5 - z) *
                   gamma(s - 0.5 + z);
        cplx den = zeta_star(1.0 + 2.0 * z) * zeta_star(1.0 - 2.0 * z) * gamma(0.5 - z) *
                   gamma(0.5 + z);
        return num / den * rankin_selberg_inner(0.5 + z, f, g, M, 12).value;
    };
    std::vector<double> pts{0.0, 0.5, 1.0};
    for (double t = 2.0; t <= 12.0 + 1e-9; t += 2.0) pts.push_back(t);
    cplx cont;
    {
        std::vector<double> full;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) full.push_back(-*it);
        full.insert(full.end(), pts.begin() + 1, pts.end());
        cont = integrate_gk_split(integrand, full, spec).value / (2.0 * PI);
    }

    // Psi terms
    cplx psi(0.0, 0.0);
    const double sigma = s.real();
    int L = int(std::floor(0.5 - sigma));
    for (int lp = 0; lp <= L; ++lp) {
        double lf = 1.0;
        for (int i = 2; i <= lp; ++i) lf *= i;
        cplx gfac = (lp % 2 ? -1.0 : 1.0) * gamma(2.0 * s + double(lp) - 1.0) /
                    (lf * gamma(s + double(lp)) * gamma(1.0 - s - double(lp)));
        cplx zsa = zeta_star(2.0 - 2.0 * s - 2.0 * double(lp));
        cplx zsb = zeta_star(2.0 * s + 2.0 * double(lp));
        bool at_edge = std::abs(sigma - (0.5 - double(lp))) < 1e-12;
        cplx t1 = V * std::exp(-sprime * std::log(double(sp.Q))) *
                  zeta_aq_closed(sprime, -0.5 + s + double(lp), cusp, sp.Q, 1) / (zsa * zsb) *
                  rankin_selberg_inner(s + double(lp), f, g, M, 16).value;
        cplx t2 = at_edge ? cplx(0.0, 0.0)
                          : V * std::exp(-sprime * std::log(double(sp.Q))) *
                                zeta_aq_closed(sprime, 0.5 - s - double(lp), cusp, sp.Q, 1) /
                                (zsb * zsa) *
                                rankin_selberg_inner(1.0 - s - double(lp), f, g, M, 16).value;
        // the mirror term enters negatively: this is the convention under
        // which the spurious poles on s' = 1/2 + s + l cancel (the contour
        // residue there drops from O(1) to ~1e-9 with this sign)
        psi += gfac * (t1 - t2);
    }
    if (sprime.real() <= 1.0) {
        cplx Kp = k_capital(sprime, cusp, sp.Q, 1, '+');
        cplx Km = k_capital(sprime, cusp, sp.Q, 1, '-');
        cplx gpart = gamma(s + 0.5 - sprime) * gamma(s - 1.5 + sprime) /
                     (std::exp(sprime * std::log(double(sp.Q))) *
                      std::exp((0.5 - sprime) * std::log(PI)) * zeta_star(3.0 - 2.0 * sprime) *
                      gamma(sprime - 0.5) * gamma(sprime - 0.5) * gamma(1.5 - sprime));
        cplx kterm = V * gpart *
                     (Kp * rankin_selberg_inner(1.5 - sprime, f, g, M, 16).value +
                      ((std::abs(sprime.real() + 0.5) < 1e-12)
                           ? cplx(0.0, 0.0)
                           : Km * rankin_selberg_inner(sprime - 0.5, f, g, M, 16).value));
        psi += kterm;
    }
    return lead * (cont + psi);
}

cplx b_a_polyfactor(const cplx& s, double A) {
    cplx acc(1.0, 0.0);
    for (int l = 0; l <= int(std::floor(A)); ++l) {
        acc *= zeta(2.0 * s + 2.0 * double(l)) * (s + double(l) - 0.5) * (s + double(l) - 0.5);
    }
    return acc;
}

} // namespace shiftconv
