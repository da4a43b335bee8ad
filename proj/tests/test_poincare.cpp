#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"

using namespace shiftconv;

namespace {

// brute-force window coset enumeration over a box of (c, d)
std::vector<std::pair<std::int64_t, std::int64_t>> brute_cosets(std::int64_t N,
                                                                const UpperHalfPoint& z, double Y,
                                                                std::int64_t box) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    if (z.y >= 1.0 / Y && z.y <= Y) out.emplace_back(0, 1);
    for (std::int64_t c = N; c <= box; c += N) {
        for (std::int64_t d = -box; d <= box; ++d) {
            if (std::gcd(c, d < 0 ? -d : d) != 1) continue;
            double q = (c * z.x + d) * (c * z.x + d) + double(c) * double(c) * z.y * z.y;
            double im = z.y / q;
            if (im >= 1.0 / Y && im <= Y) out.emplace_back(c, d);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        std::int64_t aa = std::abs(a.second), bb = std::abs(b.second);
        if (aa != bb) return aa < bb;
        return a.second < b.second;
    });
    return out;
}

ShiftParams sp_level(std::int64_t N0, std::int64_t h = 1) {
    ShiftParams sp;
    sp.N0 = N0;
    sp.h = h;
    return sp;
}

} // namespace

TEST_CASE("volume normalization") {
    CHECK(fundamental_volume(1) == doctest::Approx(PI / 3.0).epsilon(1e-14));
    CHECK(fundamental_volume(6) == doctest::Approx(4.0 * PI).epsilon(1e-14));
}

TEST_CASE("coset enumeration against brute force") {
    {
        UpperHalfPoint z{0.0, 1.0};
        auto reps = coset_reps(1, z, 1.0001);
        REQUIRE(reps.size() == 2);
        CHECK(reps[0] == std::make_pair<std::int64_t, std::int64_t>(0, 1));
        CHECK(reps[1] == std::make_pair<std::int64_t, std::int64_t>(1, 0));
    }
    {
        // window of zero length excludes Im = 2 for generic x
        UpperHalfPoint z{0.3, 2.0};
        auto reps = coset_reps(1, z, 1.0);
        CHECK(reps.empty());
    }
    for (std::int64_t N : {1, 2}) {
        UpperHalfPoint z{0.21, 1.0};
        auto a = coset_reps(N, z, 3.0);
        auto b = brute_cosets(N, z, 3.0, 100);
        CHECK(a == b);
    }
}

TEST_CASE("poincare_value matches brute force and is invariant") {
    ShiftParams sp = sp_level(1);
    TruncationWindow w{3.0, 1.0};
    UpperHalfPoint z{0.0, 2.0};
    cplx s(2.0, 0.0);
    cplx val = poincare_value(z, s, sp, w);
    // brute force over |c|, |d| <= 200 with the same summand
    cplx ref(0.0, 0.0);
    for (auto [c, d] : brute_cosets(1, z, 3.0, 200)) {
        cplx zz(z.x, z.y);
        cplx gz;
        if (c == 0) {
            gz = zz;
        } else {
            std::int64_t dm = d % c;
            if (dm < 0) dm += c;
            std::int64_t a = (c == 1) ? 0 : mod_inverse(dm, c);
            std::int64_t b = (a * d - 1) / c;
            gz = (double(a) * zz + double(b)) / (double(c) * zz + double(d));
        }
        ref += std::exp(s * std::log(gz.imag()) +
                        cplx(2.0 * PI * gz.imag() * (1.0 - w.delta), -2.0 * PI * gz.real()));
    }
    CHECK(std::abs(val - ref) < 1e-12 * (1.0 + std::abs(ref)));

    // Gamma-invariance under T and S at level 1
    TruncationWindow w2{3.0, 0.5};
    UpperHalfPoint z0{0.37, 1.13};
    cplx base = poincare_value(z0, cplx(1.7, 0.4), sp, w2);
    UpperHalfPoint tz{z0.x + 1.0, z0.y};
    cplx tv = poincare_value(tz, cplx(1.7, 0.4), sp, w2);
    CHECK(std::abs(tv - base) < 1e-12 * (1.0 + std::abs(base)));
    cplx zz(z0.x, z0.y);
    cplx szc = -1.0 / zz;
    UpperHalfPoint sz{szc.real(), szc.imag()};
    cplx sv = poincare_value(sz, cplx(1.7, 0.4), sp, w2);
    CHECK(std::abs(sv - base) < 1e-12 * (1.0 + std::abs(base)));
}

TEST_CASE("poincare_value invariant under random words at levels 1, 2, 6") {
    std::mt19937_64 rng(97);
    for (std::int64_t N0 : {1, 2, 6}) {
        ShiftParams sp = sp_level(N0);
        std::int64_t N = sp.level();
        TruncationWindow w{2.5, 0.6};
        cplx s(1.9, 0.2);
        for (int trial = 0; trial < 10; ++trial) {
            // word in T = [1 1; 0 1] and V = [1 0; N 1]
            std::int64_t a = 1, b = 0, c = 0, d = 1;
            int len = 1 + int(rng() % 3);
            for (int i = 0; i < len; ++i) {
                int pick = int(rng() % 4);
                std::int64_t e = (pick % 2) ? 1 : -1;
                std::int64_t w0, x0, y0, z0w;
                if (pick < 2) { w0 = 1; x0 = e; y0 = 0; z0w = 1; }
                else { w0 = 1; x0 = 0; y0 = e * N; z0w = 1; }
                std::int64_t na = a * w0 + b * y0, nb = a * x0 + b * z0w;
                std::int64_t nc = c * w0 + d * y0, nd = c * x0 + d * z0w;
                a = na; b = nb; c = nc; d = nd;
            }
            UpperHalfPoint z{0.21, 0.9};
            cplx zz(z.x, z.y);
            cplx gz = (double(a) * zz + double(b)) / (double(c) * zz + double(d));
            UpperHalfPoint zg{gz.real(), gz.imag()};
            cplx v0 = poincare_value(z, s, sp, w);
            cplx v1 = poincare_value(zg, s, sp, w);
            CHECK(std::abs(v0 - v1) < 1e-12 * (1.0 + std::abs(v0)));
        }
    }
}

TEST_CASE("fourier coefficient: diagonal-only case") {
    // level 2, y placed so the c-sum support is empty
    ShiftParams sp = sp_level(2);
    TruncationWindow w{3.0, 0.5};
    double y = 1.2; // c >= 2 gives Y/(c^2 y) < 1
    cplx s(2.0, 0.0);
    cplx a = poincare_fourier(-1, y, s, sp, w);
    cplx expect = std::exp(s * std::log(y) + 2.0 * PI * y * (1.0 - 0.5));
    CHECK(std::abs(a - expect) < 1e-12 * std::abs(expect));
    // and a vanishing one away from the diagonal
    cplx b = poincare_fourier(3, y, s, sp, w);
    CHECK(std::abs(b) < 1e-12);
}

TEST_CASE("fourier coefficients against direct x-quadrature") {
    ShiftParams sp = sp_level(1);
    TruncationWindow w{3.0, 0.5};
    double y = 1.1;
    cplx s(2.0, 0.0);
    // direct \int_0^1 P(x+iy) e^{-2 pi i m x} dx with breakpoints where coset
    // terms switch on/off
    auto direct = [&](std::int64_t m) {
        std::vector<double> pts{0.0, 1.0};
        double Y = w.Y;
        for (std::int64_t c = 1; c * c * y <= Y; ++c) {
            for (double bound : {Y, 1.0 / Y}) {
                double disc = y / bound - double(c) * double(c) * y * y;
                if (disc < 0.0) continue;
                double B = std::sqrt(disc);
                for (std::int64_t d = -std::int64_t(B + c + 2); d <= std::int64_t(B + c + 2); ++d) {
                    for (double sgn : {-1.0, 1.0}) {
                        double xs = (-double(d) + sgn * B) / double(c);
                        if (xs > 0.0 && xs < 1.0) pts.push_back(xs);
                    }
                }
            }
        }
        QuadratureSpec q;
        q.max_subdivisions = 400;
        auto f = [&](double x) {
            UpperHalfPoint z{x, y};
            return poincare_value(z, s, sp, w) *
                   std::exp(cplx(0.0, -2.0 * PI * double(m) * x));
        };
        return integrate_gk_split(f, pts, q).value;
    };
    for (std::int64_t m : {0, -1, 5}) {
        cplx formula = poincare_fourier(m, y, s, sp, w);
        cplx oracle = direct(m);
        CHECK(std::abs(formula - oracle) < 1e-8 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("v_product basics") {
    CoefficientTable f = delta_coefficients(60);
    // y^k |f|^2 >= 0 for f = g, l1 = l2 = 1
    for (double y : {0.9, 1.4, 3.0}) {
        UpperHalfPoint z{0.27, y};
        cplx v = v_product(z, f, f, 1, 1, 50);
        CHECK(std::abs(v.imag()) < 1e-12 * std::abs(v));
        CHECK(v.real() >= 0.0);
    }
    // leading-term dominance at large y
    UpperHalfPoint zt{0.0, 10.0};
    cplx v = v_product(zt, f, f, 1, 1, 50);
    double lead = std::pow(10.0, 12) * std::exp(-4.0 * PI * 10.0);
    CHECK(std::abs(v.real() - lead) < 1e-3 * lead);
    // invariance V(gz) = V(z) under S at level 1
    UpperHalfPoint z0{0.3, 1.2};
    cplx zz(z0.x, z0.y);
    cplx szc = -1.0 / zz;
    UpperHalfPoint sz{szc.real(), szc.imag()};
    cplx a = v_product(z0, f, f, 1, 1, 55);
    cplx b = v_product(sz, f, f, 1, 1, 55);
    CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
}

TEST_CASE("petersson normalization and symmetry") {
    auto one = [](const UpperHalfPoint&) { return cplx(1.0, 0.0); };
    CHECK(std::abs(petersson_inner_fd(one, one, 1, 24) - cplx(1.0, 0.0)) < 1e-10);
    // level 6 exercises the coset translates and the volume 4 pi
    CHECK(std::abs(petersson_inner_fd(one, one, 6, 16) - cplx(1.0, 0.0)) < 1e-8);
    // <F, G> = conj <G, F>
    auto F = [](const UpperHalfPoint& p) { return cplx(p.y * std::exp(-p.y), 0.3 * p.x); };
    auto G = [](const UpperHalfPoint& p) { return cplx(std::exp(-2.0 * p.y), 0.1); };
    cplx fg = petersson_inner_fd(F, G, 1, 24);
    cplx gf = petersson_inner_fd(G, F, 1, 24);
    CHECK(std::abs(fg - std::conj(gf)) < 1e-10 * (1.0 + std::abs(fg)));
}

TEST_CASE("unfolded inner product basics") {
    CoefficientTable f = delta_coefficients(4000);
    ShiftParams sp = sp_level(1);
    TruncationWindow w{10.0, 0.5};
    // truncation below the first admissible m2 gives an empty sum:
    // at l1 = 5, l2 = 1, h = 4, the first solution is m2 = 1 -> use h = 3
    ShiftParams sp2 = sp_level(1, 3);
    sp2.l1 = 5;
    CHECK(std::abs(unfolded_inner(cplx(2.0, 0.0), sp2, w, f, f, 1).value) == 0.0);

    TruncatedValue t1 = unfolded_inner(cplx(2.0, 0.0), sp, w, f, f, 1000);
    TruncatedValue t2 = unfolded_inner(cplx(2.0, 0.0), sp, w, f, f, 2000);
    CHECK(std::abs(t1.value - t2.value) <= t1.tail_bound);
    CHECK_THROWS_AS(unfolded_inner(cplx(0.9, 0.0), sp, w, f, f, 100), DomainError);
}

TEST_CASE("flagship: unfolded inner equals fundamental-domain quadrature") {
    CoefficientTable f = delta_coefficients(3000);
    ShiftParams sp = sp_level(1);
    TruncationWindow w{10.0, 0.5};
    cplx s(2.0, 0.0);
    TruncatedValue unfolded = unfolded_inner(s, sp, w, f, f, 1500);

    auto P = [&](const UpperHalfPoint& z) { return poincare_value(z, s, sp, w); };
    auto V = [&](const UpperHalfPoint& z) { return v_product(z, f, f, 1, 1, 60); };
    cplx fd = petersson_inner_fd(P, V, 1, 40);
    CHECK(std::abs(fd - unfolded.value) < 1e-3 * std::abs(unfolded.value));
}

TEST_CASE("fourier completeness reconstructs the series") {
    // large Y so the window-boundary jumps are negligible
    ShiftParams sp = sp_level(1);
    TruncationWindow w{2500.0, 0.5};
    double y = 1.1;
    cplx s(2.0, 0.0);
    std::vector<cplx> coef;
    for (std::int64_t m = -10; m <= 10; ++m) coef.push_back(poincare_fourier(m, y, s, sp, w));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.02, 0.98);
    double scale = 0.0;
    for (const auto& c : coef) scale = std::max(scale, std::abs(c));
    for (int t = 0; t < 5; ++t) {
        double x = ux(rng);
        cplx rec(0.0, 0.0);
        for (std::int64_t m = -10; m <= 10; ++m)
            rec += coef[size_t(m + 10)] * std::exp(cplx(0.0, 2.0 * PI * double(m) * x));
        cplx direct = poincare_value(UpperHalfPoint{x, y}, s, sp, w);
        CHECK(std::abs(rec - direct) < 1e-6 * scale);
    }
}

TEST_CASE("parameter validation") {
    ShiftParams sp;
    sp.N0 = 4;
    CHECK_THROWS_AS(sp.validate(), DomainError);
    sp = ShiftParams{};
    sp.h = 0;
    CHECK_THROWS_AS(sp.validate(), DomainError);
    TruncationWindow w{0.5, 0.5};
    CHECK_THROWS_AS(w.validate(), DomainError);
    TruncationWindow w2{3.0, 1.5};
    CHECK_THROWS_AS(w2.validate(), DomainError);
}
