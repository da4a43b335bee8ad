#include "shiftconv/sums.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shiftconv/doubleseries.hpp"
#include "shiftconv/dseries.hpp"
#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"

namespace shiftconv {

double BumpProfile::G(double u) const {
    if (u <= 1.0 || u >= 2.0) return 0.0;
    return std::exp(4.0 - 1.0 / ((u - 1.0) * (2.0 - u)));
}

cplx BumpProfile::g(const cplx& s) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find({s.real(), s.imag()});
        if (it != cache_.end()) return it->second;
    }
    // int_1^2 G(x) x^{-s-1} dx; the integrand is C^inf with all derivatives
    // vanishing at the endpoints, so fixed-order Gauss-Legendre converges fast
    int n = 96 + 2 * int(std::abs(s.imag()));
    auto f = [&](double x) { return cplx(G(x)) * std::exp(-(s + 1.0) * std::log(x)); };
    cplx v = integrate_gl(f, 1.0, 2.0, std::min(n, 512));
    {
        std::lock_guard<std::mutex> lk(mu_);
        cache_[{s.real(), s.imag()}] = v;
    }
    return v;
}

std::pair<cplx, cplx> mellin_beta_identity(const cplx& beta, double t, double gamma_line) {
    if (!(t > 0.0)) throw DomainError("mellin_beta_identity needs t > 0");
    if (!(gamma_line > 0.0 && gamma_line < beta.real()))
        throw DomainError("mellin_beta_identity needs 0 < gamma < Re beta");
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-12;
    spec.max_subdivisions = 400;
    double U = 42.0 + std::abs(beta.imag());
    auto f = [&](double v) {
        cplx u(gamma_line, v);
        return gamma(u) * gamma(beta - u) * std::exp(-u * std::log(t));
    };
    cplx lhs = integrate_gk(f, -U, U, spec).value / (2.0 * PI);
    cplx rhs = gamma(beta) * std::exp(-beta * std::log1p(t));
    return {lhs, rhs};
}

cplx s_single(double x, const ShiftParams& sp, const CoefficientTable& f,
              const CoefficientTable& g, const BumpProfile& profile) {
    sp.validate();
    if (!(x >= 1.0)) throw DomainError("s_single needs x >= 1");
    std::int64_t lo = std::int64_t(std::floor(x)) + 1, hi = std::int64_t(std::ceil(2.0 * x));
    if (hi > g.size() || (hi * sp.l2 + sp.h) / sp.l1 > f.size())
        throw GapError("s_single: coefficient tables too short");
    cplx acc(0.0, 0.0);
    for (std::int64_t m2 = lo; m2 <= hi; ++m2) {
        double w = profile.G(double(m2) / x);
        if (w == 0.0) continue;
        std::int64_t num = m2 * sp.l2 + sp.h;
        if (num % sp.l1 != 0) continue;
        acc += f.normalized(num / sp.l1) * g.normalized(m2) * w;
    }
    return acc;
}

cplx s_single_mellin(double x, const ShiftParams& sp, const CoefficientTable& f,
                     const CoefficientTable& g, const BumpProfile& profile, double gamma_u,
                     std::int64_t M_D) {
    sp.validate();
    const int k = f.spec.weight;
    if (!(gamma_u > 0.0 && gamma_u < 0.5 * double(k - 1)))
        throw DomainError("s_single_mellin needs 0 < gamma < (k-1)/2");
    const double sig_s = 2.0;
    // uniform trapezoid lattices with a shared step so s+u falls on a lattice
    const double step = 0.1;
    double Tu = 16.0;
    // truncate the g-lattice where the bump transform has decayed
    double Tg = 30.0;
    double g0 = std::abs(profile.g(cplx(-(sig_s + gamma_u), 0.0)));
    while (Tg < 120.0 &&
           std::abs(profile.g(cplx(-(sig_s + gamma_u), Tg))) > 1e-13 * g0)
        Tg += 10.0;
    double Ts = Tg + Tu;

    std::int64_t Ns = std::int64_t(Ts / step), Nu = std::int64_t(Tu / step);
    // 1D factor tables
    std::vector<cplx> Dv(size_t(2 * Ns + 1));
    {
        DSeriesQuery q;
        q.sp = sp;
        q.delta = 0.0;
        q.M = M_D;
        q.f = &f;
        q.g = &g;
        for (std::int64_t i = -Ns; i <= Ns; ++i) {
            q.s = cplx(sig_s, double(i) * step);
            Dv[size_t(i + Ns)] = d_truncated(q).value;
        }
    }
    std::vector<cplx> Uv(size_t(2 * Nu + 1));
    for (std::int64_t i = -Nu; i <= Nu; ++i) {
        cplx u(gamma_u, double(i) * step);
        Uv[size_t(i + Nu)] = gamma(u) * gamma(0.5 * double(k - 1) - u) *
                             std::exp(-u * std::log(double(sp.h)));
    }
    std::vector<cplx> Cv(size_t(2 * (Ns + Nu) + 1));
    for (std::int64_t i = -(Ns + Nu); i <= Ns + Nu; ++i) {
        cplx su(sig_s + gamma_u, double(i) * step);
        // the transform paired with x^{+v} is int G(y) y^{+v} dy/y = g(-v)
        Cv[size_t(i + Ns + Nu)] =
            std::exp(su * std::log(double(sp.l2) * x)) * profile.g(-su);
    }
    cplx acc(0.0, 0.0);
    for (std::int64_t i = -Ns; i <= Ns; ++i) {
        cplx row(0.0, 0.0);
        for (std::int64_t j = -Nu; j <= Nu; ++j)
            row += Uv[size_t(j + Nu)] * Cv[size_t(i + j + Ns + Nu)];
        acc += Dv[size_t(i + Ns)] * row;
    }
    // (1/2 pi i)^2 (i d tau)^2 = -(d tau)^2/(2 pi)^2... the two i factors give
    // (i)^2/(2 pi i)^2 = 1/(2 pi)^2
    cplx pref = std::exp(0.5 * double(k - 1) * std::log(double(sp.l1 * sp.l2))) /
                gamma(cplx(0.5 * double(k - 1), 0.0));
    return pref * acc * step * step / (4.0 * PI * PI);
}

cplx s_double(double x, double y, const ShiftParams& sp, const CoefficientTable& f,
              const CoefficientTable& g, const BumpProfile& g1, const BumpProfile& g2) {
    sp.validate();
    if (!(x >= 1.0) || !(y >= 1.0)) throw DomainError("s_double needs x, y >= 1");
    std::int64_t x_lo = std::int64_t(std::floor(x)) + 1, x_hi = std::int64_t(std::ceil(2.0 * x));
    std::int64_t y_lo = std::int64_t(std::floor(y)) + 1, y_hi = std::int64_t(std::ceil(2.0 * y));
    if (x_hi > g.size() || y_hi > f.size()) throw GapError("s_double: tables too short");
    cplx acc(0.0, 0.0);
    for (std::int64_t m2 = x_lo; m2 <= x_hi; ++m2) {
        double w2 = g2.G(double(m2) / x);
        if (w2 == 0.0) continue;
        for (std::int64_t m1 = y_lo; m1 <= y_hi; ++m1) {
            std::int64_t diff = sp.l1 * m1 - sp.l2 * m2;
            if (diff <= 0 || diff % sp.Q != 0) continue;
            double w1 = g1.G(double(m1) / y);
            if (w1 == 0.0) continue;
            acc += f.normalized(m1) * std::conj(g.normalized(m2)) * w1 * w2;
        }
    }
    return acc;
}

cplx s_double_mellin(double x, double y, const ShiftParams& sp, const CoefficientTable& f,
                     const CoefficientTable& g, const BumpProfile& g1, const BumpProfile& g2,
                     std::int64_t M2_box, std::int64_t H_box) {
    sp.validate();
    const int k = f.spec.weight;
    const double eps = 0.05;
    const double gamma1 = 0.5 * double(k + 1);          // s line
    const double gamma2 = 1.0 + 2.0 * eps;              // w line
    const double gamma3 = 0.5 * double(k + 1) + eps;    // u line
    const double step = 0.125;
    const double Tg = 40.0, Tu = 16.0;
    std::int64_t Ng = std::int64_t(Tg / step), Nu = std::int64_t(Tu / step);

    // precompute the boxed Z_Q on the lattice Z[tz][tu] with
    // S = gamma1+gamma2-gamma3 + i tz step, W = gamma3 - (k-1)/2 + i tu step
    const double sigS = gamma1 + gamma2 - gamma3;
    // the lattice W variable is u itself: (h0 Q)^{-w_arg-(k-1)/2} with
    // w_arg = u + (1-k)/2 has total exponent u
    const double sigW = gamma3;
    std::int64_t Nz = 2 * Ng + Nu;
    std::vector<std::int64_t> m2s, m1s;
    std::vector<double> lnB;
    std::int64_t m1_needed = (sp.l2 * M2_box + H_box * sp.Q) / sp.l1 + 1;
    if (m1_needed > f.size() || M2_box > g.size())
        throw GapError("s_double_mellin: tables too short for the Z box");
    // G[alpha-index][tu]: the h0-sum against beta^{-W}
    std::vector<cplx> bpow(size_t(H_box) * size_t(2 * Nu + 1));
    for (std::int64_t h0 = 1; h0 <= H_box; ++h0) {
        double lb = std::log(double(h0 * sp.Q));
        double mag = std::pow(double(h0 * sp.Q), -sigW);
        for (std::int64_t j = -Nu; j <= Nu; ++j)
            bpow[size_t(h0 - 1) * size_t(2 * Nu + 1) + size_t(j + Nu)] =
                mag * std::exp(cplx(0.0, -double(j) * step * lb));
    }
    std::vector<cplx> G(size_t(M2_box) * size_t(2 * Nu + 1), cplx(0.0, 0.0));
    const double half_km1 = 0.5 * double(k - 1);
    for (std::int64_t m2 = 1; m2 <= M2_box; ++m2) {
        for (std::int64_t h0 = 1; h0 <= H_box; ++h0) {
            std::int64_t num = sp.l2 * m2 + h0 * sp.Q;
            if (num % sp.l1 != 0) continue;
            cplx c = f.normalized(num / sp.l1) * std::conj(g.normalized(m2)) *
                     std::pow(1.0 + double(h0 * sp.Q) / double(sp.l2 * m2), half_km1);
            const cplx* brow = &bpow[size_t(h0 - 1) * size_t(2 * Nu + 1)];
            cplx* grow = &G[size_t(m2 - 1) * size_t(2 * Nu + 1)];
            for (std::int64_t j = 0; j < 2 * Nu + 1; ++j) grow[size_t(j)] += c * brow[size_t(j)];
        }
    }
    // Z[tz][tu] = sum_alpha alpha^{-S} G[alpha][tu]
    std::vector<cplx> Z(size_t(2 * Nz + 1) * size_t(2 * Nu + 1), cplx(0.0, 0.0));
    for (std::int64_t m2 = 1; m2 <= M2_box; ++m2) {
        const cplx* grow = &G[size_t(m2 - 1) * size_t(2 * Nu + 1)];
        bool empty = true;
        for (std::int64_t j = 0; j < 2 * Nu + 1 && empty; ++j)
            if (grow[size_t(j)] != cplx(0.0, 0.0)) empty = false;
        if (empty) continue;
        double la = std::log(double(sp.l2 * m2));
        double mag = std::pow(double(sp.l2 * m2), -sigS);
        cplx rot = std::exp(cplx(0.0, -step * la));
        cplx cur = mag * std::exp(cplx(0.0, double(Nz) * step * la)); // at tz = -Nz
        for (std::int64_t i = -Nz; i <= Nz; ++i) {
            cplx* zrow = &Z[size_t(i + Nz) * size_t(2 * Nu + 1)];
            for (std::int64_t j = 0; j < 2 * Nu + 1; ++j) zrow[size_t(j)] += cur * grow[size_t(j)];
            cur *= rot;
        }
    }
    // 1D factors
    std::vector<cplx> Sv(size_t(2 * Ng + 1)), Wv(size_t(2 * Ng + 1)), Uv(size_t(2 * Nu + 1));
    for (std::int64_t i = -Ng; i <= Ng; ++i) {
        cplx s(gamma1, double(i) * step);
        // g(-s) pairs with x^{+s} under the (gGdef) transform pair
        Sv[size_t(i + Ng)] = g2.g(-s) * std::exp(s * std::log(x)) *
                             std::exp(s * std::log(double(sp.l2)));
        cplx w(gamma2, double(i) * step);
        Wv[size_t(i + Ng)] = g1.g(-w) * std::exp(w * std::log(y)) *
                             std::exp(w * std::log(double(sp.l1))) /
                             gamma(w + half_km1);
    }
    for (std::int64_t j = -Nu; j <= Nu; ++j) Uv[size_t(j + Nu)] = gamma(cplx(gamma3, double(j) * step));
    // Gamma((k-1)/2 + w - u) on the (i - j) lattice
    std::vector<cplx> Mv(size_t(2 * (Ng + Nu) + 1));
    for (std::int64_t d = -(Ng + Nu); d <= Ng + Nu; ++d)
        Mv[size_t(d + Ng + Nu)] = gamma(cplx(half_km1 + gamma2 - gamma3, double(d) * step));

    cplx acc(0.0, 0.0);
    for (std::int64_t i = -Ng; i <= Ng; ++i) {       // s
        for (std::int64_t jw = -Ng; jw <= Ng; ++jw) { // w
            cplx sw = Sv[size_t(i + Ng)] * Wv[size_t(jw + Ng)];
            cplx inner(0.0, 0.0);
            for (std::int64_t ju = -Nu; ju <= Nu; ++ju) { // u
                std::int64_t tz = i + jw - ju;
                inner += Z[size_t(tz + Nz) * size_t(2 * Nu + 1) + size_t(ju + Nu)] *
                         Uv[size_t(ju + Nu)] * Mv[size_t(jw - ju + Ng + Nu)];
            }
            acc += sw * inner;
        }
    }
    return acc * std::pow(step / (2.0 * PI), 3.0);
}

ScanReport cancellation_scan(const std::vector<std::int64_t>& hs, const std::vector<double>& xs,
                             bool double_mode, const ShiftParams& sp, const CoefficientTable& f,
                             const CoefficientTable& g, const BumpProfile& profile,
                             std::uint64_t seed) {
    if (xs.size() < 6) throw InsufficientDataError("scan needs at least 6 x points");
    for (size_t i = 2; i < xs.size(); ++i) {
        double r1 = xs[i] / xs[i - 1], r0 = xs[i - 1] / xs[i - 2];
        if (std::abs(r1 - r0) > 1e-6 * r0)
            throw InsufficientDataError("scan x grid must be geometric");
    }
    ScanReport rep;
    for (std::int64_t h : hs) {
        ShiftParams s2 = sp;
        s2.h = h;
        for (double x : xs) {
            cplx S = double_mode ? s_double(x, x, s2, f, g, profile, profile)
                                 : s_single(x, s2, f, g, profile);
            rep.rows.push_back({x, h, S});
        }
    }
    std::vector<double> lx, ly;
    for (const auto& r : rep.rows) {
        if (std::abs(r.S) == 0.0) {
            ++rep.zeros_excluded;
            continue;
        }
        lx.push_back(std::log(r.x));
        ly.push_back(std::log(std::abs(r.S)));
    }
    if (lx.size() < 3) throw InsufficientDataError("scan: too many zero sums");
    auto fit = [](const std::vector<double>& a, const std::vector<double>& b) {
        double n = double(a.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            sx += a[i]; sy += b[i]; sxx += a[i] * a[i]; sxy += a[i] * b[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    rep.slope = fit(lx, ly);
    // bootstrap spread, deterministic under the seed
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, lx.size() - 1);
    std::vector<double> slopes;
    for (int b = 0; b < 200; ++b) {
        std::vector<double> bx, by;
        for (size_t i = 0; i < lx.size(); ++i) {
            size_t j = pick(rng);
            bx.push_back(lx[j]);
            by.push_back(ly[j]);
        }
        double den = 0.0, mean = 0.0;
        for (double v : bx) mean += v;
        mean /= double(bx.size());
        for (double v : bx) den += (v - mean) * (v - mean);
        if (den < 1e-12) { --b; continue; }
        slopes.push_back(fit(bx, by));
    }
    double mu = 0.0;
    for (double v : slopes) mu += v;
    mu /= double(slopes.size());
    double var = 0.0;
    for (double v : slopes) var += (v - mu) * (v - mu);
    rep.bootstrap_sd = std::sqrt(var / double(slopes.size()));
    return rep;
}

} // namespace shiftconv
