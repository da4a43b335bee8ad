#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shiftconv/quadrature.hpp"
#include "shiftconv/specfun.hpp"
#include "shiftconv/sums.hpp"

using namespace shiftconv;

namespace {
const CoefficientTable& tbl() {
    static CoefficientTable t = delta_coefficients(262200);
    return t;
}
}

TEST_CASE("bump support, positivity, transform decay") {
    BumpProfile p;
    CHECK(p.G(0.5) == 0.0);
    CHECK(p.G(2.5) == 0.0);
    CHECK(p.G(1.0) == 0.0);
    CHECK(p.G(1.5) == 1.0);
    CHECK(p.G(1.2) > 0.0);
    CHECK(p.g(cplx(0.0, 0.0)).real() > 0.0);
    CHECK(std::abs(p.g(cplx(0.0, 0.0)).imag()) < 1e-15);
    // super-polynomial decay on vertical lines: fitted exponent >= 6
    std::vector<double> lx, ly;
    for (double t : {5.0, 10.0, 20.0, 40.0}) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(std::abs(p.g(cplx(2.0, t)))));
    }
    double n = 4, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 4; ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("bump transform decay exponent: ", -slope);
    CHECK(-slope >= 6.0);
}

TEST_CASE("bump inversion round trip") {
    BumpProfile p;
    QuadratureSpec spec;
    spec.max_subdivisions = 2000;
    for (double x : {1.25, 1.5, 1.75}) {
        auto f = [&](double t) {
            cplx s(2.0, t);
            return p.g(s) * std::exp(s * std::log(x));
        };
        std::vector<double> pts;
        for (double t = -60.0; t <= 60.0 + 1e-9; t += 5.0) pts.push_back(t);
        cplx rec = integrate_gk_split(f, pts, spec).value / (2.0 * PI);
        CHECK(std::abs(rec - cplx(p.G(x), 0.0)) < 1e-6);
    }
}

TEST_CASE("beta-kernel Mellin identity") {
    {
        auto [lhs, rhs] = mellin_beta_identity(cplx(2.0, 0.0), 1.0, 1.0);
        CHECK(std::abs(rhs - cplx(0.25, 0.0)) < 1e-15);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    {
        auto [lhs, rhs] = mellin_beta_identity(cplx(5.5, 0.0), 0.7, 2.0);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    {
        auto [lhs, rhs] = mellin_beta_identity(cplx(3.0, 1.0), 2.0, 1.3);
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("s_single: support exactness and brute force") {
    const auto& f = tbl();
    ShiftParams sp;
    BumpProfile p;
    // empty shift set inside the support window
    ShiftParams sp7;
    sp7.l1 = 7;
    sp7.h = 1;
    // x = 2: m2 in {3, 4}, m2 + 1 in {4, 5}, neither divisible by 7
    CHECK(std::abs(s_single(2.0, sp7, f, f, p)) == 0.0);
    // brute force at x = 100
    cplx direct = s_single(100.0, sp, f, f, p);
    cplx brute(0.0, 0.0);
    for (std::int64_t m2 = 100; m2 <= 201; ++m2) {
        double w = p.G(double(m2) / 100.0);
        if (w == 0.0) continue;
        brute += f.normalized(m2 + 1) * f.normalized(m2) * w;
    }
    CHECK(std::abs(direct - brute) < 1e-14 * (1.0 + std::abs(brute)));
    // support exactness: perturbing coefficients outside [x, 2x] is invisible
    CoefficientTable f2 = f;
    f2.a[50] += cplx(1000.0, 0.0);
    f2.a[5000] += cplx(1000.0, 0.0);
    cplx direct2 = s_single(100.0, sp, f2, f2, p);
    CHECK(direct2.real() == direct.real());
    CHECK(direct2.imag() == direct.imag());
}

TEST_CASE("flagship: inverse Mellin representation of the single sum") {
    const auto& f = tbl();
    ShiftParams sp;
    BumpProfile p;
    cplx direct = s_single(100.0, sp, f, f, p);
    cplx mellin = s_single_mellin(100.0, sp, f, f, p, 1.0);
    MESSAGE("direct ", direct.real(), " mellin ", mellin.real());
    CHECK(std::abs(mellin - direct) < 1e-2 * std::abs(direct));
    // contour-shift invariance: gamma = 1 vs gamma = 3 (no pole crossed)
    cplx mellin3 = s_single_mellin(100.0, sp, f, f, p, 3.0);
    CHECK(std::abs(mellin3 - mellin) < 1e-6 * (1.0 + std::abs(mellin)));
}

TEST_CASE("s_double: brute force and structure") {
    const auto& f = tbl();
    ShiftParams sp;
    sp.Q = 3;
    BumpProfile p;
    cplx v = s_double(50.0, 50.0, sp, f, f, p, p);
    cplx brute(0.0, 0.0);
    for (std::int64_t m2 = 51; m2 <= 100; ++m2) {
        for (std::int64_t m1 = 51; m1 <= 100; ++m1) {
            std::int64_t diff = m1 - m2;
            if (diff <= 0 || diff % 3 != 0) continue;
            brute += f.normalized(m1) * f.normalized(m2) * p.G(m1 / 50.0) * p.G(m2 / 50.0);
        }
    }
    CHECK(std::abs(v - brute) < 1e-14 * (1.0 + std::abs(brute)));
    ShiftParams spbig = sp;
    spbig.Q = 2000; // beyond l1 * 2y: no admissible shift
    CHECK(std::abs(s_double(50.0, 50.0, spbig, f, f, p, p)) == 0.0);
    // real tables at l1 = l2: the sum is real
    cplx a = s_double(40.0, 40.0, sp, f, f, p, p);
    CHECK(std::abs(a.imag()) < 1e-12 * (1.0 + std::abs(a)));
}

TEST_CASE("triple-Mellin representation of the double sum") {
    const auto& f = tbl();
    ShiftParams sp;
    sp.Q = 3;
    BumpProfile p;
    cplx direct = s_double(40.0, 40.0, sp, f, f, p, p);
    cplx mellin = s_double_mellin(40.0, 40.0, sp, f, f, p, p, 2000, 2000);
    MESSAGE("direct ", direct.real(), "  mellin ", mellin.real());
    CHECK(std::abs(mellin - direct) < 5e-2 * std::abs(direct));
}

TEST_CASE("cancellation scan basics") {
    const auto& f = tbl();
    ShiftParams sp;
    BumpProfile p;
    std::vector<double> xs;
    for (int e = 10; e <= 17; ++e) xs.push_back(std::pow(2.0, e));
    CHECK_THROWS_AS(cancellation_scan({1}, {8.0, 16.0, 32.0}, false, sp, f, f, p),
                    InsufficientDataError);
    ScanReport rep = cancellation_scan({1}, xs, false, sp, f, f, p, 7);
    MESSAGE("delta scan slope: ", rep.slope, " +- ", rep.bootstrap_sd);
    CHECK(rep.rows.size() == 8);
    CHECK(rep.slope > 0.35);
    CHECK(rep.slope < 0.65);
    ScanReport rep2 = cancellation_scan({1}, xs, false, sp, f, f, p, 7);
    CHECK(rep2.slope == rep.slope);
    CHECK(rep2.bootstrap_sd == rep.bootstrap_sd);
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].S.real() == rep2.rows[i].S.real());
    }
}

TEST_CASE("control series has no cancellation") {
    // A(m) = B(m) = 1: the smoothed count grows like x
    CoefficientTable ones;
    ones.spec.weight = 12;
    ones.a.assign(300000, cplx(0.0, 0.0));
    for (size_t m = 1; m < ones.a.size(); ++m)
        ones.a[m] = cplx(std::pow(double(m), 5.5), 0.0);
    ShiftParams sp;
    BumpProfile p;
    std::vector<double> xs;
    for (int e = 10; e <= 17; ++e) xs.push_back(std::pow(2.0, e));
    ScanReport rep = cancellation_scan({1}, xs, false, sp, ones, ones, p, 7);
    MESSAGE("control slope: ", rep.slope);
    CHECK(rep.slope >= 0.9);
}
