#include "shiftconv/poincare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"

namespace shiftconv {

std::int64_t ShiftParams::level() const { return N0 * l1 * l2 / std::gcd(l1, l2); }

void ShiftParams::validate() const {
    if (h < 1) throw DomainError("shift h must be >= 1");
    if (l1 < 1 || l2 < 1 || N0 < 1 || Q < 1) throw DomainError("shift parameters must be positive");
    if (!is_squarefree(N0) || !is_squarefree(l1) || !is_squarefree(l2))
        throw DomainError("N0, l1, l2 must be square free");
    if (std::gcd(std::gcd(N0, l1), l2) != 1)
        throw DomainError("(N0, l1, l2) must be coprime as a triple");
    if (Q > 1 && std::gcd(l1 * l2, Q) != 1)
        throw DomainError("gcd(l1 l2, Q) must be 1 when Q > 1");
}

void TruncationWindow::validate() const {
    if (!(Y > 1.0)) throw DomainError("window Y must exceed 1");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("window delta must lie in (0, 1]");
}

double fundamental_volume(std::int64_t N) {
    double v = PI / 3.0 * double(N);
    for (const auto& [p, e] : factorize(N)) v *= 1.0 + 1.0 / double(p);
    return v;
}

std::vector<std::pair<std::int64_t, std::int64_t>> coset_reps(std::int64_t N,
                                                              const UpperHalfPoint& z, double Y) {
    if (!(Y > 0.0)) throw DomainError("coset_reps needs Y > 0");
    if (!(z.y > 0.0)) throw DomainError("point must lie in the upper half plane");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    const double y = z.y, x = z.x;
    if (y >= 1.0 / Y - 1e-15 && y <= Y + 1e-15) out.emplace_back(0, 1);
    std::int64_t cmax = std::int64_t(std::floor(std::sqrt(Y / y) + 1e-12));
    for (std::int64_t c = N; c <= cmax; c += N) {
        double disc = y * Y - double(c) * double(c) * y * y;
        if (disc < 0.0) continue;
        double B = std::sqrt(disc);
        std::int64_t dlo = std::int64_t(std::ceil(-double(c) * x - B - 1e-12));
        std::int64_t dhi = std::int64_t(std::floor(-double(c) * x + B + 1e-12));
        for (std::int64_t d = dlo; d <= dhi; ++d) {
            if (std::gcd(c, d < 0 ? -d : d) != 1) continue;
            double q = (double(c) * x + double(d)) * (double(c) * x + double(d)) +
                       double(c) * double(c) * y * y;
            double im = y / q;
            if (im < 1.0 / Y - 1e-15 || im > Y + 1e-15) continue;
            out.emplace_back(c, d);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        std::int64_t aa = a.second < 0 ? -a.second : a.second;
        std::int64_t bb = b.second < 0 ? -b.second : b.second;
        if (aa != bb) return aa < bb;
        return a.second < b.second;
    });
    return out;
}

namespace {

// gamma z for the coset rep (c, d); (0, 1) is the identity.
cplx coset_image(const std::pair<std::int64_t, std::int64_t>& cd, const UpperHalfPoint& z) {
    auto [c, d] = cd;
    cplx zz(z.x, z.y);
    if (c == 0) return zz;
    std::int64_t dm = d % c;
    if (dm < 0) dm += c;
    std::int64_t a = (c == 1) ? 0 : mod_inverse(dm, c);
    std::int64_t b = (a * d - 1) / c;
    return (double(a) * zz + double(b)) / (double(c) * zz + double(d));
}

// a d - b c = 1 for coprime (c, d)
std::pair<std::int64_t, std::int64_t> complete_row(std::int64_t c, std::int64_t d) {
    std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1, u = d, v = c;
    while (v != 0) {
        std::int64_t q = u / v;
        std::int64_t tmp = u - q * v; u = v; v = tmp;
        tmp = s0 - q * s1; s0 = s1; s1 = tmp;
        tmp = t0 - q * t1; t0 = t1; t1 = tmp;
    }
    // u = gcd(d, c) = s0 d + t0 c; for u = -1 flip signs
    if (u == -1) { s0 = -s0; t0 = -t0; u = 1; }
    if (u != 1) throw DomainError("complete_row needs coprime (c, d)");
    return {s0, -t0}; // a = s0, b = -t0
}

} // namespace

cplx poincare_value(const UpperHalfPoint& z, const cplx& s, const ShiftParams& sp,
                    const TruncationWindow& w) {
    sp.validate();
    w.validate();
    const std::int64_t N = sp.level();
    auto reps = coset_reps(N, z, w.Y);
    cplx acc(0.0, 0.0);
    const double h = double(sp.h);
    for (const auto& cd : reps) {
        cplx gz = coset_image(cd, z);
        double gy = gz.imag(), gx = gz.real();
        acc += std::exp(s * std::log(gy) +
                        cplx(2.0 * PI * h * gy * (1.0 - w.delta), -2.0 * PI * h * gx));
    }
    require_finite(acc, "poincare_value");
    return acc;
}

cplx poincare_fourier(std::int64_t m, double y, const cplx& s, const ShiftParams& sp,
                      const TruncationWindow& w, const QuadratureSpec& q) {
    sp.validate();
    w.validate();
    q.validate();
    if (!(y > 0.0)) throw DomainError("poincare_fourier needs y > 0");
    const std::int64_t N = sp.level();
    const double h = double(sp.h), Y = w.Y, delta = w.delta;

    cplx acc(0.0, 0.0);
    if (m == -sp.h && y >= 1.0 / Y && y <= Y)
        acc += std::exp(s * std::log(y) + 2.0 * PI * h * y * (1.0 - delta));

    // moduli c = N, 2N, ... until the window support empties (c^2 y > Y)
    for (std::int64_t c = N;; c += N) {
        double c2y = double(c) * double(c) * y;
        double uhi2 = Y / c2y - 1.0;
        if (uhi2 < 0.0) break;
        double uhi = std::sqrt(uhi2);
        double ulo2 = 1.0 / (Y * c2y) - 1.0;
        double ulo = ulo2 > 0.0 ? std::sqrt(ulo2) : 0.0;
        cplx S = kloosterman(m, -sp.h, c);
        if (std::abs(S) < 1e-15) continue;
        auto integrand = [&](double u) {
            double P = 1.0 / (c2y * (u * u + 1.0));
            return std::exp(s * std::log(P) +
                            cplx(2.0 * PI * h * (1.0 - delta) * P,
                                 2.0 * PI * h * u * P - 2.0 * PI * double(m) * u * y));
        };
        double step = std::min(0.5, 1.5 / (1.0 + std::abs(double(m)) * y + h));
        auto make_panels = [&](double a, double b) {
            std::vector<double> p{a};
            for (double t = a + step; t < b; t += step) p.push_back(t);
            p.push_back(b);
            return p;
        };
        cplx I(0.0, 0.0);
        if (ulo == 0.0) {
            I = integrate_gk_split(integrand, make_panels(-uhi, uhi), q).value;
        } else {
            I = integrate_gk_split(integrand, make_panels(-uhi, -ulo), q).value +
                integrate_gk_split(integrand, make_panels(ulo, uhi), q).value;
        }
        acc += S * y * I;
    }
    require_finite(acc, "poincare_fourier");
    return acc;
}

cplx v_product(const UpperHalfPoint& z, const CoefficientTable& f, const CoefficientTable& g,
               std::int64_t l1, std::int64_t l2, std::int64_t M, const QuadratureSpec& q) {
    if (f.spec.weight != g.spec.weight) throw DomainError("v_product needs equal weights");
    if (M < 1 || M > f.size() || M > g.size()) throw GapError("v_product truncation beyond table");
    const int k = f.spec.weight;
    const double y = z.y;
    auto expand = [&](const CoefficientTable& t, std::int64_t l) {
        cplx acc(0.0, 0.0);
        for (std::int64_t n = 1; n <= M; ++n) {
            double ph = 2.0 * PI * double(n * l);
            acc += t.coeff(n) * std::exp(cplx(-ph * y, ph * z.x));
        }
        return acc;
    };
    cplx fz = expand(f, l1), gz = expand(g, l2);
    // q-expansion tail, |a(n)| <= 8.45 n^{(k-1)/2 + 1/4}
    double lmin = double(std::min(l1, l2));
    double t1 = 8.45 * std::pow(double(M + 1), 0.5 * (k - 1) + 0.25) *
                std::exp(-2.0 * PI * double(M + 1) * lmin * y);
    double scale = std::max({std::abs(fz), std::abs(gz), 1e-30});
    if (t1 / scale > q.rel_tol)
        throw TruncationError("v_product q-expansion tail above tolerance; increase M");
    return std::pow(y, k) * std::conj(fz) * gz;
}

std::vector<std::array<std::int64_t, 4>> gamma0_coset_reps(std::int64_t N) {
    if (N == 1) return {{1, 0, 0, 1}};
    // orbits of (c : d) in P^1(Z/N) under unit scaling
    std::vector<std::array<std::int64_t, 4>> reps;
    std::vector<bool> seen(size_t(N * N), false);
    for (std::int64_t c = 0; c < N; ++c) {
        for (std::int64_t d = 0; d < N; ++d) {
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            if (seen[size_t(c * N + d)]) continue;
            for (std::int64_t u = 1; u < N; ++u) {
                if (std::gcd(u, N) != 1) continue;
                seen[size_t((u * c % N) * N + (u * d % N))] = true;
            }
            std::int64_t C = c, D = d;
            while (std::gcd(C, D) != 1 || (C == 0 && D == 0)) D += N;
            auto [a, b] = complete_row(C, D);
            reps.push_back({a, b, C, D});
        }
    }
    return reps;
}

cplx petersson_inner_fd(const AutomorphicFn& F, const AutomorphicFn& G, std::int64_t N,
                        int grid_n) {
    if (grid_n < 8) throw MeshError("grid order too small");
    const double ymax = 12.0;
    auto reps = gamma0_coset_reps(N);
    auto integrate_once = [&](int n) {
        const auto& xs = gl_nodes(n);
        const auto& wsx = gl_weights(n);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            double x = 0.5 * xs[size_t(i)]; // x in [-1/2, 1/2]
            double wx = 0.5 * wsx[size_t(i)];
            double y0 = std::sqrt(std::max(1e-12, 1.0 - x * x));
            double vlo = 1.0 / ymax, vhi = 1.0 / y0; // v = 1/y
            for (int j = 0; j < n; ++j) {
                double v = 0.5 * (vlo + vhi) + 0.5 * (vhi - vlo) * xs[size_t(j)];
                double wv = 0.5 * (vhi - vlo) * wsx[size_t(j)];
                double y = 1.0 / v;
                cplx zz(x, y);
                cplx cell(0.0, 0.0);
                for (const auto& mat : reps) {
                    cplx gz = (double(mat[0]) * zz + double(mat[1])) /
                              (double(mat[2]) * zz + double(mat[3]));
                    UpperHalfPoint p{gz.real(), gz.imag()};
                    cell += F(p) * std::conj(G(p));
                }
                acc += wx * wv * cell;
            }
        }
        // cusp-strip correction: int_{ymax}^inf dy/y^2 of the x-average,
        // frozen at its y = ymax value (exact for constant terms, negligible
        // for cuspidally decaying integrands)
        for (const auto& mat : reps) {
            cplx colavg(0.0, 0.0);
            for (int i = 0; i < n; ++i) {
                double x = 0.5 * xs[size_t(i)];
                cplx zz(x, ymax);
                cplx gz = (double(mat[0]) * zz + double(mat[1])) /
                          (double(mat[2]) * zz + double(mat[3]));
                UpperHalfPoint p{gz.real(), gz.imag()};
                colavg += 0.5 * wsx[size_t(i)] * F(p) * std::conj(G(p));
            }
            acc += colavg / ymax;
        }
        return acc / fundamental_volume(N);
    };
    cplx v1 = integrate_once(grid_n);
    cplx v2 = integrate_once(grid_n + grid_n / 2);
    double err = std::abs(v1 - v2);
    if (err > 1e-3 * std::abs(v2) && err > 1e-12)
        throw MeshError("fundamental-domain quadrature error above 1e-3 relative");
    return v2;
}

double deligne_tail_bound(std::int64_t M, double sigma, std::int64_t l1, std::int64_t l2,
                          std::int64_t h, int k) {
    // termwise |A(m1) B(m2)| (1 + h/(l2 m2))^{(k-1)/2} (l2 m2)^{-sigma} with
    // d(m) <= 8.45 m^{1/4}; certified shape for sigma > 3/2, logarithmic
    // average heuristic below that.
    double pref = 71.4025 * std::pow(double(l2) / double(l1), 0.25) *
                  std::pow(double(l1), -0.5 * (k - 1)) *
                  std::pow(1.0 + double(h) / double(l2 * M), 0.5 * (k - 1) + 0.25) *
                  std::pow(double(l2), -sigma);
    if (sigma > 1.5 + 1e-9)
        return pref * std::pow(double(M), 1.5 - sigma) / (sigma - 1.5);
    double lg = std::log(double(M) + 2.0);
    return pref * 6.0 * std::pow(double(M), std::min(-0.01, 1.0 - sigma)) * lg * lg * lg;
}

TruncatedValue unfolded_inner(const cplx& s, const ShiftParams& sp, const TruncationWindow& w,
                              const CoefficientTable& f, const CoefficientTable& g,
                              std::int64_t M) {
    sp.validate();
    w.validate();
    if (s.real() <= 1.0) throw DomainError("unfolded_inner needs Re s > 1");
    if (f.spec.weight != g.spec.weight) throw DomainError("weights must agree");
    const int k = f.spec.weight;
    const double V = fundamental_volume(sp.level());
    const cplx skm1 = s + double(k - 1);
    cplx acc(0.0, 0.0);
    for (std::int64_t m2 = 1; m2 <= M; ++m2) {
        std::int64_t num = m2 * sp.l2 + sp.h;
        if (num % sp.l1 != 0) continue;
        std::int64_t m1 = num / sp.l1;
        if (m1 > f.size() || m2 > g.size()) throw GapError("unfolded_inner table too short");
        double alpha = 1.0 + w.delta * double(sp.h) / (2.0 * double(sp.l2 * m2));
        double A = 4.0 * PI * double(sp.l2 * m2) / w.Y;
        double B = 4.0 * PI * double(sp.l2 * m2) * w.Y;
        cplx yint = std::exp(-skm1 * std::log(alpha)) *
                    (upper_incomplete_gamma(skm1, alpha * A) -
                     upper_incomplete_gamma(skm1, alpha * B));
        acc += f.coeff(m1) * std::conj(g.coeff(m2)) *
               std::exp(-skm1 * std::log(double(sp.l2 * m2))) * yint;
    }
    cplx pref = std::exp(-skm1 * std::log(4.0 * PI)) / V;
    TruncatedValue out;
    out.value = pref * acc;
    out.truncation = M;
    double gam = std::abs(gamma(cplx(s.real() + k - 1, 0.0)));
    out.tail_bound =
        std::abs(pref) * gam * deligne_tail_bound(M, s.real(), sp.l1, sp.l2, sp.h, k);
    return out;
}

} // namespace shiftconv
