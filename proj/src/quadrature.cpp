#include "shiftconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace shiftconv {

void require_finite(const cplx& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ConvergenceError(std::string(what) + " produced a non-finite value");
}
void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw ConvergenceError(std::string(what) + " produced a non-finite value");
}

namespace {

long long gcd_ll(long long a, long long b) {
    while (b) { long long t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
}

} // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = gcd_ll(num, den);
    if (g > 1) { num /= g; den /= g; }
}

Rational Rational::operator+(const Rational& o) const {
    __int128 n = (__int128)num * o.den + (__int128)o.num * den;
    __int128 d = (__int128)den * o.den;
    __int128 g = 1;
    { // gcd on 128-bit
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        g = a == 0 ? 1 : a;
    }
    n /= g; d /= g;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
        throw ResourceError("rational overflow");
    return Rational((long long)n, (long long)d);
}

namespace {

// Kronrod 15-point nodes/weights (positive half) and embedded Gauss-7 weights.
const double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
    cplx integral;
    double err;
};

PanelEval gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx resg = fc * kWg[3];
    cplx resk = fc * kWgk[7];
    double resabs = std::abs(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        cplx f1 = f(c - h * kXgk[j]);
        cplx f2 = f(c + h * kXgk[j]);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    PanelEval out;
    out.integral = resk * h;
    double diff = std::abs(resk - resg) * std::abs(h);
    // quadpack-style sharpening of the raw Gauss/Kronrod difference
    double scale = resabs * std::abs(h);
    if (scale > 0.0 && diff > 0.0) {
        double r = diff / scale;
        out.err = scale * std::min(1.0, std::pow(200.0 * r, 1.5));
    } else {
        out.err = diff;
    }
    return out;
}

struct Panel {
    double a, b, err;
    cplx integral;
    bool operator<(const Panel& o) const { return err < o.err; }
};

} // namespace

QuadResult integrate_gk(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    QuadResult out;
    if (a == b) return out;
    std::priority_queue<Panel> heap;
    PanelEval e0 = gk15(f, a, b);
    out.evaluations = 15;
    heap.push({a, b, e0.err, e0.integral});
    cplx total = e0.integral;
    double toterr = e0.err;
    int splits = 0;
    while (splits < spec.max_subdivisions) {
        double goal = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (toterr <= goal) break;
        Panel top = heap.top();
        heap.pop();
        double m = 0.5 * (top.a + top.b);
        if (m <= top.a || m >= top.b) { heap.push(top); break; } // interval exhausted
        PanelEval l = gk15(f, top.a, m);
        PanelEval r = gk15(f, m, top.b);
        out.evaluations += 30;
        total += l.integral + r.integral - top.integral;
        toterr += l.err + r.err - top.err;
        heap.push({top.a, m, l.err, l.integral});
        heap.push({m, top.b, r.err, r.integral});
        ++splits;
    }
    out.value = total;
    out.err_estimate = toterr;
    require_finite(out.value, "integrate_gk");
    return out;
}

QuadResult integrate_gk_split(const Integrand& f, const std::vector<double>& points,
                              const QuadratureSpec& spec) {
    QuadResult out;
    if (points.size() < 2) return out;
    std::vector<double> p(points);
    std::sort(p.begin(), p.end());
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i + 1] - p[i] <= 0.0) continue;
        QuadResult q = integrate_gk(f, p[i], p[i + 1], spec);
        out.value += q.value;
        out.err_estimate += q.err_estimate;
        out.evaluations += q.evaluations;
    }
    return out;
}

cplx integrate_trapezoid(const Integrand& f, double a, double b, int n) {
    if (n < 2) throw DomainError("trapezoid needs n >= 2");
    const double h = (b - a) / (n - 1);
    cplx s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n - 1; ++i) s += f(a + i * h);
    return s * h;
}

namespace {
std::map<int, std::pair<std::vector<double>, std::vector<double>>> g_gl_cache;
std::mutex g_gl_mutex;

void gl_compute(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    // Newton iteration on Legendre P_n, Chebyshev initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}
} // namespace

const std::vector<double>& gl_nodes(int n) {
    std::lock_guard<std::mutex> lk(g_gl_mutex);
    auto& e = g_gl_cache[n];
    if (e.first.empty()) gl_compute(n, e.first, e.second);
    return e.first;
}
const std::vector<double>& gl_weights(int n) {
    std::lock_guard<std::mutex> lk(g_gl_mutex);
    auto& e = g_gl_cache[n];
    if (e.first.empty()) gl_compute(n, e.first, e.second);
    return e.second;
}

cplx integrate_gl(const Integrand& f, double a, double b, int n) {
    const auto& x = gl_nodes(n);
    const auto& w = gl_weights(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
}

} // namespace shiftconv
