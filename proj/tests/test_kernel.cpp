#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shiftconv/kernel.hpp"
#include "shiftconv/specfun.hpp"

using namespace shiftconv;

namespace {
KernelQuery kq(cplx s, cplx z, double delta) {
    KernelQuery q;
    q.s = s;
    q.z = z;
    q.delta = delta;
    return q;
}
double rel(const cplx& a, const cplx& b) { return std::abs(a - b) / (1.0 + std::abs(b)); }
}

TEST_CASE("closed-form anchor at delta = 2") {
    // Laplace transform of K_0: M(2,0,2) = pi^{3/2}/(8 sqrt 2)
    double expect = std::pow(PI, 1.5) / (8.0 * std::sqrt(2.0));
    KernelValue a = m_quadrature(kq(cplx(2, 0), cplx(0, 0), 2.0));
    CHECK(std::abs(a.value - cplx(expect, 0.0)) < 1e-10);
    KernelValue b = m_hypergeom(kq(cplx(2, 0), cplx(0, 0), 2.0)); // 2F1 argument 0
    CHECK(std::abs(b.value - cplx(expect, 0.0)) < 1e-12);
}

TEST_CASE("quadrature vs hypergeom") {
    KernelValue a = m_quadrature(kq(cplx(2, 0), cplx(0, 0), 0.5));
    KernelValue b = m_hypergeom(kq(cplx(2, 0), cplx(0, 0), 0.5));
    CHECK(rel(a.value, b.value) < 1e-8);
    CHECK(std::abs(a.value - cplx(2.24569534225160623782768661363, 0.0)) < 1e-9);

    KernelValue c = m_quadrature(kq(cplx(1.2, 0), cplx(0, 0.3), 0.2));
    KernelValue d = m_hypergeom(kq(cplx(1.2, 0), cplx(0, 0.3), 0.2));
    CHECK(rel(c.value, d.value) < 1e-8);
    CHECK(std::abs(c.value - cplx(4.13147253364508, 0.0)) < 1e-7);
}

TEST_CASE("evenness and conjugation") {
    KernelValue p = m_quadrature(kq(cplx(1.7, 0), cplx(0, 0.4), 0.3));
    KernelValue m = m_quadrature(kq(cplx(1.7, 0), cplx(0, -0.4), 0.3));
    CHECK(std::abs(p.value - m.value) < 1e-12 * (1.0 + std::abs(p.value)));
    // hypergeom route is not manifestly even in z; identity check
    KernelValue hp = m_hypergeom(kq(cplx(1.5, 0.7), cplx(0, 0.2), 0.4));
    KernelValue hm = m_hypergeom(kq(cplx(1.5, 0.7), cplx(0, -0.2), 0.4));
    CHECK(std::abs(hp.value - hm.value) < 1e-10 * (1.0 + std::abs(hp.value)));
    // conj(M(s,z)) = M(conj s, conj z) by reality of the integrand data
    KernelValue c1 = m_hypergeom(kq(cplx(1.5, -0.7), cplx(0, -0.2), 0.4));
    CHECK(std::abs(std::conj(hp.value) - c1.value) < 1e-10 * (1.0 + std::abs(hp.value)));
}

TEST_CASE("positivity and monotone delta decrease at z = 0") {
    double prev = 1e300;
    for (double delta : {0.2, 0.5, 0.8, 1.2}) {
        KernelValue v = m_quadrature(kq(cplx(1.4, 0), cplx(0, 0), delta));
        CHECK(std::abs(v.value.imag()) < 1e-10);
        CHECK(v.value.real() > 0.0);
        CHECK(v.value.real() < prev);
        prev = v.value.real();
    }
}

TEST_CASE("barnes overlap and continuation") {
    KernelValue a = m_barnes(kq(cplx(1.3, 0), cplx(0, 0), 0.4));
    KernelValue b = m_hypergeom(kq(cplx(1.3, 0), cplx(0, 0), 0.4));
    CHECK(rel(a.value, b.value) < 1e-6);
    // continuation past Re s = 1/2: finite value
    KernelValue c = m_barnes(kq(cplx(0.1, 0), cplx(0, 0.2), 0.3));
    CHECK(std::isfinite(c.value.real()));
    CHECK(std::isfinite(c.value.imag()));
    CHECK(std::abs(c.value) < 1e6);
    KernelValue d = m_barnes(kq(cplx(-0.4, 0.8), cplx(0, 1.1), 0.35));
    CHECK(std::isfinite(d.value.real()));
    CHECK(std::abs(d.value) < 1e8);
}

TEST_CASE("barnes matches hypergeom across a strip") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> us(0.6, 2.0), ut(-3.0, 3.0), ud(0.1, 0.9);
    for (int i = 0; i < 20; ++i) {
        cplx s(us(rng), 0.3 * ut(rng));
        cplx z(0.0, ut(rng));
        double delta = ud(rng);
        KernelValue a = m_barnes(kq(s, z, delta));
        KernelValue b = m_hypergeom(kq(s, z, delta));
        CHECK(rel(a.value, b.value) < 1e-6);
    }
}

TEST_CASE("pole locations of the continuation at z = 0.35i") {
    cplx z(0.0, 0.35);
    // only s = 1/2 +- z - l: Re s in {1/2 - l}; off-pole scan stays bounded
    for (double sr = -1.95; sr < 1.0; sr += 0.1) {
        double dist = 1e9;
        for (int l = 0; l < 4; ++l) dist = std::min(dist, std::abs(sr - (0.5 - l)));
        if (dist < 0.04) continue;
        KernelValue v = m_barnes(kq(cplx(sr, 0.0), z, 0.3));
        CHECK(std::abs(v.value) < 1e7);
    }
    // blow-up approaching the pole at s = 1/2 + z
    double m1 = std::abs(m_barnes(kq(cplx(0.5, 0.35 - 1e-2), z, 0.3)).value);
    double m2 = std::abs(m_barnes(kq(cplx(0.5, 0.35 - 1e-3), z, 0.3)).value);
    CHECK(m2 > 5.0 * m1);
}

TEST_CASE("limit formula") {
    cplx v = m_limit(cplx(0.25, 0.0), cplx(0.0, 0.0));
    CHECK(std::abs(v - cplx(19.7539491584650844869795743532, 0.0)) < 1e-10);
    // delta -> 0 convergence of the hypergeom route to the limit
    cplx s(0.3, 0.0), z(0.0, 0.5);
    cplx lim = m_limit(s, z);
    double prev = 1e300;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        KernelValue h = m_hypergeom(kq(s, z, delta));
        double err = std::abs(h.value - lim);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2 * (1.0 + std::abs(lim)));
    cplx a = m_limit(cplx(0.2, 0.4), cplx(0.0, 0.6));
    cplx b = m_limit(cplx(0.2, -0.4), cplx(0.0, -0.6));
    CHECK(std::abs(std::conj(a) - b) < 1e-12 * (1.0 + std::abs(a)));
    CHECK_THROWS_AS(m_limit(cplx(1.0, 0.0), cplx(0.0, 0.3)), PoleError);
}

TEST_CASE("truncated integral approaches the full one") {
    KernelQuery q = kq(cplx(2.0, 0.0), cplx(0.0, 0.0), 0.5);
    KernelValue full = m_quadrature(q);
    double prev = 1e300;
    for (double Y : {2.0, 4.0, 8.0, 16.0}) {
        KernelValue t = m_truncated(q, Y, 1);
        double err = std::abs(full.value - t.value);
        CHECK(err < prev);
        prev = err;
    }
    // the missed lower tail shrinks only like Y^{-(Re s - 1/2)}
    CHECK(prev < 1.0);
}

TEST_CASE("truncation bound formula plug-in") {
    KernelQuery q = kq(cplx(3.0, 0.0), cplx(0.0, 0.0), 0.5);
    double Y = 2.0;
    double expect = std::exp(-Y * 2.0 * PI * 0.5) * std::pow(Y, 3.0 + 0.0 - 2.0) / 0.5 +
                    std::pow(1.0 / Y, 3.0 - 0.5);
    CHECK(prop21_bound(q, Y, 1, 0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("truncation error within a constant of the bound") {
    for (double Y : {4.0, 16.0}) {
        for (double t : {0.0, 2.0}) {
            KernelQuery q = kq(cplx(3.0, 0.0), cplx(0.0, t), 0.5);
            KernelValue full = m_quadrature(q);
            KernelValue trunc = m_truncated(q, Y, 1);
            double diff = std::abs(full.value - trunc.value);
            CHECK(diff <= 10.0 * prop21_bound(q, Y, 1, 2, 30.0) + 1e-14);
        }
    }
}

TEST_CASE("laurent coefficients") {
    CHECK(laurent_c(0).first == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(laurent_c(1).first == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(laurent_c(2).first == doctest::Approx(0.75).epsilon(1e-14));
    // c1(0) = ln 2 - gamma via psi(1/2) = -gamma - 2 ln 2
    CHECK(laurent_c(0).second == doctest::Approx(std::log(2.0) - EULER_GAMMA).epsilon(1e-12));
}

TEST_CASE("residue_s leading term identities and delta trend") {
    cplx z(0.0, 1.3);
    // l = 0, sign '-': sqrt(pi) 2^z Gamma(-2z) / Gamma(1/2 - z)
    cplx expect = std::sqrt(PI) * std::pow(2.0, z) * gamma(-2.0 * z) / gamma(0.5 - z);
    CHECK(std::abs(residue_s_leading(z, 0, '-') - expect) < 1e-12 * (1.0 + std::abs(expect)));
    // at l = 0 both residues are exactly their leading terms (the
    // delta-dependence cancels in closed form)
    CHECK(std::abs(residue_s(z, 0, 0.01, '-') - residue_s_leading(z, 0, '-')) < 1e-13);
    CHECK(std::abs(residue_s(z, 0, 0.01, '+') - residue_s_leading(z, 0, '+')) < 1e-13);
    // at l = 1 the delta-dependent correction is genuine; fit its decay
    for (char sign : {'-', '+'}) {
        double prev = 1e300;
        std::vector<double> errs;
        for (double delta : {1e-2, 1e-3, 1e-4}) {
            cplx r = residue_s(z, 1, delta, sign);
            double e = std::abs(r - residue_s_leading(z, 1, sign));
            errs.push_back(e);
            CHECK(e <= prev * (1.0 + 1e-9));
            prev = e;
        }
        if (errs[0] > 1e-12) {
            double slope = std::log(errs[0] / errs[2]) / std::log(1e2);
            CHECK(slope >= 0.2);
        }
    }
}

TEST_CASE("residue via circle contour of m_barnes") {
    cplx z(0.0, 1.3);
    double delta = 1e-3;
    cplx s0 = 0.5 - z; // minus family, l = 0
    cplx contour = circle_residue_s(kq(s0, z, delta), s0, 1e-2, 16);
    cplx direct = residue_s(z, 0, delta, '-');
    CHECK(std::abs(contour - direct) < 0.2 * std::abs(direct));
    cplx s1 = 0.5 + z; // plus family
    cplx contour_p = circle_residue_s(kq(s1, z, delta), s1, 1e-2, 16);
    cplx direct_p = residue_s(z, 0, delta, '+');
    CHECK(std::abs(contour_p - direct_p) < 0.2 * std::abs(direct_p));
}

TEST_CASE("residue_z structure") {
    for (cplx s : {cplx(0.45, 0.0), cplx(0.41, 0.2)}) {
        for (int m : {0, 1}) {
            cplx sm = s - double(m);
            cplx a = residue_z_leading(sm, m, '1');
            cplx b = residue_z_leading(sm, m, '2');
            CHECK(std::abs(a + b) < 1e-13 * (1.0 + std::abs(a)));
        }
    }
    CHECK_THROWS_AS(residue_z(cplx(0.5, 0.0), 0, 1e-3, '2'), DomainError);
    CHECK_THROWS_AS(residue_z(cplx(2.0, 0.0), 0, 1e-3, '2'), DomainError);
    cplx s(0.45, 0.0);
    std::vector<double> errs;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        cplx r = residue_z(s, 0, delta, '2');
        errs.push_back(std::abs(r - residue_z_leading(s, 0, '2')));
    }
    CHECK(errs[2] < errs[0]);
    double slope = std::log(errs[0] / errs[2]) / std::log(1e2);
    CHECK(slope >= 0.2);
}

TEST_CASE("residue_z against a z-direction circle contour") {
    cplx s(0.45, 0.0);
    double delta = 1e-3;
    cplx z0 = s - 0.5; // pole of M in z at z = s + m - 1/2, m = 0
    double r = 0.02;
    cplx acc = 0.0;
    int n = 16;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * PI * (k + 0.5) / n;
        cplx dz = r * cplx(std::cos(th), std::sin(th));
        KernelValue v = m_barnes(kq(s, z0 + dz, delta));
        acc += v.value * dz;
    }
    cplx contour = acc / double(n);
    cplx direct = residue_z(s, 0, delta, '2');
    CHECK(std::abs(contour - direct) < 0.2 * std::abs(direct));
}

TEST_CASE("vertical-line envelope grows at most polynomially") {
    std::vector<double> xs, ys;
    for (double t : {2.0, 6.0, 12.0, 20.0, 32.0}) {
        KernelValue v = m_barnes(kq(cplx(0.8, t), cplx(0.0, 0.0), 0.4));
        double mag = std::abs(v.value) * std::exp(0.5 * PI * t);
        REQUIRE(std::isfinite(mag));
        REQUIRE(mag > 0.0);
        xs.push_back(std::log(t));
        ys.push_back(std::log(mag));
    }
    double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("fitted envelope exponent: ", slope);
    CHECK(std::isfinite(slope));
    CHECK(std::abs(slope) < 50.0);
}

TEST_CASE("query validation") {
    KernelQuery q;
    q.delta = 3.0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q.delta = 0.5;
    q.continuation_depth = 10.0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    CHECK_THROWS_AS(m_quadrature(kq(cplx(0.4, 0.0), cplx(0.0, 0.0), 0.5)), DomainError);
    CHECK_THROWS_AS(m_barnes(kq(cplx(1.0, 0.0), cplx(0.3, 0.0), 0.5)), DomainError);
}
