#include "shiftconv/dseries.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "shiftconv/eisenstein.hpp"
#include "shiftconv/kernel.hpp"
#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"

namespace shiftconv {

void DSeriesQuery::validate() const {
    sp.validate();
    if (!(delta >= 0.0)) throw DomainError("dseries delta must be >= 0");
    if (M < 1) throw DomainError("dseries truncation must be >= 1");
    if (!f || !g) throw DomainError("dseries query needs coefficient tables");
    if (f->spec.weight != g->spec.weight) throw DomainError("weights must agree");
}

std::vector<SpectralDatum> load_spectral_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::map<std::pair<double, double>, SpectralDatum> by_t;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        double tre, tim, rre, rim, vre, vim;
        std::int64_t h;
        if (!(ss >> tre >> tim >> h >> rre >> rim >> vre >> vim))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected `t_re t_im h rho_re rho_im innerV_re innerV_im`");
        auto& d = by_t[{tre, tim}];
        d.t_j = cplx(tre, tim);
        d.rho_minus_h[h] = cplx(rre, rim);
        d.inner_Vu = cplx(vre, vim);
    }
    std::vector<SpectralDatum> out;
    for (auto& [key, d] : by_t) {
        if (std::abs(d.t_j) < 1e-12)
            throw UnsupportedError("t_j = 0 spectral data is not supported");
        if (d.t_j.real() != 0.0 && d.t_j.imag() != 0.0)
            throw ParseError("t_j must be real or purely imaginary");
        if (d.t_j.real() == 0.0 && std::abs(d.t_j.imag()) >= 0.5)
            throw ParseError("exceptional t_j must have |Im t_j| < 1/2");
        out.push_back(std::move(d));
    }
    return out;
}

TruncatedValue d_truncated(const DSeriesQuery& q) {
    q.validate();
    const auto& sp = q.sp;
    const int k = q.f->spec.weight;
    const cplx skm1 = q.s + double(k - 1);
    cplx acc(0.0, 0.0);
    for (std::int64_t m2 = 1; m2 <= q.M; ++m2) {
        std::int64_t num = m2 * sp.l2 + sp.h;
        if (num % sp.l1 != 0) continue;
        std::int64_t m1 = num / sp.l1;
        if (m1 > q.f->size() || m2 > q.g->size())
            throw GapError("d_truncated: coefficient tables too short");
        cplx term = q.f->coeff(m1) * std::conj(q.g->coeff(m2)) *
                    std::exp(-skm1 * std::log(double(sp.l2 * m2)));
        if (q.delta > 0.0)
            term *= std::exp(-skm1 * std::log(1.0 + q.delta * double(sp.h) /
                                                        (2.0 * double(sp.l2 * m2))));
        acc += term;
    }
    TruncatedValue out;
    out.value = acc;
    out.truncation = q.M;
    out.tail_bound = deligne_tail_bound(q.M, q.s.real(), sp.l1, sp.l2, sp.h, k);
    return out;
}

namespace {

// E*(z, w) = zeta*(2w) y^w + zeta*(2-2w) y^{1-w}
//   + 4 sqrt(y) sum_{n>=1} n^{w-1/2} sigma_{1-2w}(n) K_{w-1/2}(2 pi n y) cos(2 pi n x)
cplx eisenstein_star(const UpperHalfPoint& z, const cplx& w) {
    cplx acc = zeta_star(2.0 * w) * std::exp(w * std::log(z.y)) +
               zeta_star(2.0 - 2.0 * w) * std::exp((1.0 - w) * std::log(z.y));
    QuadratureSpec spec;
    for (std::int64_t n = 1; n <= 16; ++n) {
        double arg = 2.0 * PI * double(n) * z.y;
        if (arg > 46.0) break;
        acc += 4.0 * std::sqrt(z.y) * std::exp((w - 0.5) * std::log(double(n))) *
               divisor_sigma(1.0 - 2.0 * w, n) * bessel_k(w - 0.5, arg, spec) *
               std::cos(2.0 * PI * double(n) * z.x);
    }
    return acc;
}

} // namespace

TruncatedValue rankin_selberg_inner(const cplx& w, const CoefficientTable& f,
                                    const CoefficientTable& g, std::int64_t M, int fd_grid) {
    if (f.spec.level != 1 || g.spec.level != 1)
        throw UnsupportedError("rankin_selberg_inner is level-1 only");
    if (f.spec.weight != g.spec.weight) throw DomainError("weights must agree");
    if (std::abs(w - 1.0) < 1e-3 || std::abs(w) < 1e-3)
        throw PoleError("rankin_selberg_inner at an Eisenstein pole");
    const int k = f.spec.weight;
    const double V = fundamental_volume(1);
    TruncatedValue out;
    out.truncation = M;
    if (w.real() > 1.1) {
        cplx wk = w + double(k - 1);
        cplx acc(0.0, 0.0);
        std::int64_t mm = std::min({M, f.size(), g.size()});
        for (std::int64_t n = 1; n <= mm; ++n)
            acc += f.coeff(n) * std::conj(g.coeff(n)) * std::exp(-wk * std::log(double(n)));
        cplx pref = zeta_star(2.0 * w) * gamma(wk) * std::exp(-wk * std::log(4.0 * PI)) / V;
        out.value = pref * acc;
        out.tail_bound = std::abs(pref) * 71.4025 *
                         ((w.real() > 1.5 + 1e-9)
                              ? std::pow(double(mm), 1.5 - w.real()) / (w.real() - 1.5)
                              : 6.0 * std::pow(std::log(double(mm) + 2.0), 3.0) *
                                    std::pow(double(mm), std::min(-0.01, 1.0 - w.real())));
        return out;
    }
    // continuation by fundamental-domain quadrature against E*
    std::int64_t qm = std::min({std::int64_t(64), f.size(), g.size()});
    auto E = [&](const UpperHalfPoint& z) { return eisenstein_star(z, w); };
    auto Vfn = [&](const UpperHalfPoint& z) { return v_product(z, f, g, 1, 1, qm); };
    out.value = petersson_inner_fd(E, Vfn, 1, fd_grid);
    out.tail_bound = 1e-6 * (1.0 + std::abs(out.value)); // grid-limited
    return out;
}

OmegaResult omega(const cplx& s, const ShiftParams& sp, const CoefficientTable& f,
                  const CoefficientTable& g, std::int64_t M) {
    sp.validate();
    if (sp.level() != 1)
        throw UnsupportedError("omega: only the level-1 cusp data is built in");
    const int k = f.spec.weight;
    OmegaResult out;
    const double sigma = s.real();
    if (sigma >= 0.5) return out;
    const int L = int(std::floor(0.5 - sigma));
    const double V = fundamental_volume(1);
    const double h = double(sp.h);
    CuspLabel cusp{1};
    for (int l = 0; l <= L; ++l) {
        cplx zs = zeta_star(2.0 * s + 2.0 * double(l));
        if (std::abs(zs) < 1e-6) throw PoleError("omega near a zero of zeta*(2s+2l)");
        cplx zs2 = zeta_star(2.0 - 2.0 * s - 2.0 * double(l));
        if (std::abs(zs2) < 1e-6) throw PoleError("omega near a zero of zeta*(2-2s-2l)");
        if (near_nonpositive_integer(2.0 * s + double(l) - 1.0, 1e-9) ||
            near_nonpositive_integer(s + double(l), 1e-9) ||
            near_nonpositive_integer(1.0 - s - double(l), 1e-9))
            throw PoleError("omega gamma-factor pole");
        OmegaTerm term;
        term.l = l;
        double lf = 1.0;
        for (int i = 2; i <= l; ++i) lf *= i;
        term.gamma_factor = (l % 2 ? -1.0 : 1.0) * gamma(1.0 - s) *
                            gamma(2.0 * s + double(l) - 1.0) /
                            (lf * gamma(s + double(l)) * gamma(1.0 - s - double(l)));
        bool at_edge = std::abs(sigma - (0.5 - double(l))) < 1e-12;
        term.first = std::exp((1.0 - s - double(l)) * std::log(PI)) *
                     std::exp((1.0 - 2.0 * s - double(l)) * std::log(h)) * V *
                     rho_closed(1.0 - s - double(l), -sp.h, cusp, 1) /
                     (gamma(1.0 - s - double(l)) * zs) *
                     rankin_selberg_inner(s + double(l), f, g, M).value;
        term.second = at_edge
                          ? cplx(0.0, 0.0)
                          : std::exp((s + double(l)) * std::log(PI)) *
                                std::exp(double(l) * std::log(h)) * V *
                                rho_closed(s + double(l), -sp.h, cusp, 1) /
                                (gamma(s + double(l)) * zs2) *
                                rankin_selberg_inner(1.0 - s - double(l), f, g, M).value;
        out.terms.push_back(term);
        // mirror term enters negatively; see the matching continuation
        // convention in the double-series module
        out.value += term.gamma_factor * (term.first - term.second);
    }
    out.value *= std::exp(double(k) * std::log(4.0 * PI)) / (2.0 * gamma(s + double(k - 1)));
    return out;
}

DSpectralResult d_spectral(const cplx& s, const ShiftParams& sp,
                           const std::vector<SpectralDatum>& spectral,
                           const CoefficientTable& f, const CoefficientTable& g, std::int64_t M,
                           double continuation_depth) {
    sp.validate();
    if (sp.level() != 1) throw UnsupportedError("d_spectral: level-1 only");
    const int k = f.spec.weight;
    if (!(s.real() > 0.5 - continuation_depth && s.real() < 0.5 - 0.5 * double(k)))
        throw DomainError("d_spectral needs 1/2 - A < Re s < 1/2 - k/2");
    for (int r = 0; r < 40; ++r) {
        if (std::abs(s.real() - (0.5 - double(r))) < 1e-3)
            throw DomainError("d_spectral: Re s too close to 1/2 - r (contour case)");
    }
    const double h = double(sp.h);
    const double V = fundamental_volume(1);
    CuspLabel cusp{1};

    DSpectralResult out;
    cplx cusp_sum(0.0, 0.0);
    for (const auto& d : spectral) {
        if (std::abs(d.t_j) < 1e-12) throw UnsupportedError("t_j = 0 datum");
        auto it = d.rho_minus_h.find(sp.h);
        if (it == d.rho_minus_h.end())
            throw NoDataError("spectral datum lacks rho(-h) for the requested shift");
        cplx itj = cplx(0.0, 1.0) * d.t_j;
        cplx gratio = gamma(s - 0.5 - itj) * gamma(s - 0.5 + itj) * gamma(1.0 - s) /
                      (gamma(0.5 - itj) * gamma(0.5 + itj));
        cusp_sum += std::conj(it->second) * gratio * std::conj(d.inner_Vu);
    }
    out.continuous_only = spectral.empty();

    // continuous part: integral over z = i tau along the imaginary axis
    QuadratureSpec spec;
    spec.abs_tol = 1e-10;
    spec.rel_tol = 1e-8;
    auto integrand = [&](double tau) {
        if (std::abs(tau) < 1e-9) return cplx(0.0, 0.0); // 1/zeta*(1+2z) vanishes
        cplx z(0.0, tau);
        cplx rho = rho_closed(0.5 - z, -sp.h, cusp, 1);
        cplx gratio = gamma(s - 0.5 - z) * gamma(s - 0.5 + z) * gamma(1.0 - s) /
                      (gamma(0.5 - z) * gamma(0.5 + z));
        cplx inner = rankin_selberg_inner(0.5 + z, f, g, M, 16).value;
        return V * 2.0 * std::exp((0.5 - z) * std::log(PI)) * std::exp(-z * std::log(h)) * rho /
               (gamma(0.5 - z) * zeta_star(1.0 + 2.0 * z)) * gratio * inner;
    };
    // conj<V, E*(., 1/2 + i tau)> decays like e^{-pi tau/2}
    const double T = 16.0;
    std::vector<double> pts{0.0, 0.5, 1.0};
    for (double t = 2.0; t <= T + 1e-9; t += 2.0) pts.push_back(t);
    cplx cont;
    if (s.imag() == 0.0) {
        // integrand(-tau) = conj(integrand(tau)) for real s
        cplx half = integrate_gk_split(integrand, pts, spec).value;
        cont = 2.0 * cplx(half.real(), 0.0) / (2.0 * PI);
    } else {
        std::vector<double> full;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) full.push_back(-*it);
        full.insert(full.end(), pts.begin() + 1, pts.end());
        cont = integrate_gk_split(integrand, full, spec).value / (2.0 * PI);
    }

    cplx pref = std::exp(double(k) * std::log(4.0 * PI)) /
                (2.0 * gamma(s + double(k - 1)) * std::exp((s - 0.5) * std::log(h)));
    out.value = pref * (cusp_sum + cont) + omega(s, sp, f, g, M).value;
    return out;
}

} // namespace shiftconv
