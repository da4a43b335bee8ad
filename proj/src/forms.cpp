#include "shiftconv/forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

namespace shiftconv {

void CuspFormSpec::validate() const {
    if (weight < 2 || weight % 2 != 0) throw DomainError("weight must be even and >= 2");
    if (level < 1 || !is_squarefree(level)) throw DomainError("level must be square free");
    if (source == "builtin-delta" && (weight != 12 || level != 1))
        throw DomainError("builtin-delta forces weight 12, level 1");
}

cplx CoefficientTable::normalized(std::int64_t m) const {
    return coeff(m) / std::pow(double(m), 0.5 * (spec.weight - 1));
}

namespace {

constexpr std::int64_t kMaxDeltaIndex = 1 << 20;

std::vector<__int128> eta3_pow8(std::int64_t M) {
    // (sum_j (-1)^j (2j+1) q^{j(j+1)/2})^8 up to q^{M-1}; tau(m) is the
    // coefficient of q^{m-1}.
    std::vector<std::pair<std::int64_t, long long>> base;
    for (std::int64_t j = 0;; ++j) {
        std::int64_t e = j * (j + 1) / 2;
        if (e >= M) break;
        base.emplace_back(e, (j % 2 ? -1LL : 1LL) * (2 * j + 1));
    }
    std::vector<__int128> p(size_t(M), 0);
    p[0] = 1;
    std::vector<__int128> q(static_cast<size_t>(M));
    for (int rep = 0; rep < 8; ++rep) {
        std::fill(q.begin(), q.end(), __int128(0));
        for (std::int64_t i = 0; i < M; ++i) {
            __int128 pi = p[size_t(i)];
            if (pi == 0) continue;
            for (const auto& [e, c] : base) {
                if (i + e >= M) break;
                q[size_t(i + e)] += pi * c;
            }
        }
        std::swap(p, q);
    }
    return p;
}

std::mutex g_tau_mutex;
std::vector<__int128> g_tau_cache; // g_tau_cache[m-1] = tau(m)

} // namespace

std::vector<__int128> delta_tau_exact(std::int64_t M) {
    if (M < 1) throw DomainError("delta_tau_exact needs M >= 1");
    if (M > kMaxDeltaIndex) throw ResourceError("tau index above configured maximum");
    std::lock_guard<std::mutex> lk(g_tau_mutex);
    if (std::int64_t(g_tau_cache.size()) < M) {
        g_tau_cache = eta3_pow8(M);
    }
    return std::vector<__int128>(g_tau_cache.begin(), g_tau_cache.begin() + M);
}

CoefficientTable delta_coefficients(std::int64_t M) {
    auto tau = delta_tau_exact(M);
    CoefficientTable t;
    t.spec = CuspFormSpec{};
    t.a.assign(size_t(M) + 1, cplx(0.0, 0.0));
    for (std::int64_t m = 1; m <= M; ++m) t.a[size_t(m)] = cplx(double(tau[size_t(m - 1)]), 0.0);
    return t;
}

CoefficientTable load_coefficients(const std::string& path, const CuspFormSpec& spec) {
    spec.validate();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    CoefficientTable t;
    t.spec = spec;
    t.a.push_back(cplx(0.0, 0.0));
    std::string line;
    std::int64_t lineno = 0, expected = 1;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::int64_t m;
        double re, im;
        if (!(ss >> m >> re >> im))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected `m re im`");
        if (m != expected) {
            if (m > expected)
                throw GapError(path + ":" + std::to_string(lineno) + ": missing index " +
                               std::to_string(expected));
            throw ParseError(path + ":" + std::to_string(lineno) + ": index not strictly increasing");
        }
        t.a.push_back(cplx(re, im));
        ++expected;
    }
    if (t.size() == 0) throw ParseError(path + ": no coefficients");
    return t;
}

void save_coefficients(const CoefficientTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[96];
    for (std::int64_t m = 1; m <= table.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%lld %.17g %.17g\n", (long long)m,
                      table.a[size_t(m)].real(), table.a[size_t(m)].imag());
        out << buf;
    }
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, newt = 1, r = m, newr = a % m;
    if (newr < 0) newr += m;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt; newt = tmp;
        tmp = r - q * newr;
        r = newr; newr = tmp;
    }
    if (r != 1) throw DomainError("mod_inverse of non-unit");
    return t < 0 ? t + m : t;
}

cplx kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
    if (c < 1) throw DomainError("kloosterman needs c >= 1");
    if (c == 1) return cplx(1.0, 0.0);
    std::int64_t mr = m % c; if (mr < 0) mr += c;
    std::int64_t nr = n % c; if (nr < 0) nr += c;
    cplx s(0.0, 0.0);
    for (std::int64_t d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        std::int64_t dbar = mod_inverse(d, c);
        std::int64_t num = (mr * d + nr * dbar) % c;
        double ph = 2.0 * PI * double(num) / double(c);
        s += cplx(std::cos(ph), std::sin(ph));
    }
    return s;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> f;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<std::int64_t> divisors_of(std::int64_t n) {
    std::vector<std::int64_t> d{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t sz = d.size();
        std::int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t r = n;
    for (const auto& [p, e] : factorize(n)) r -= r / p;
    return r;
}

bool is_squarefree(std::int64_t n) {
    if (n < 1) return false;
    for (const auto& [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

int divisor_count(std::int64_t n) {
    int c = 1;
    for (const auto& [p, e] : factorize(n)) c *= (e + 1);
    return c;
}

cplx divisor_sigma(const cplx& nu, std::int64_t n, std::int64_t coprime_to) {
    if (n < 1) throw DomainError("divisor_sigma needs n >= 1");
    cplx s(0.0, 0.0);
    for (std::int64_t d : divisors_of(n)) {
        if (coprime_to > 1 && std::gcd(d, coprime_to) != 1) continue;
        s += std::exp(nu * std::log(double(d)));
    }
    return s;
}

namespace {

struct UnitGroupFactor {
    std::int64_t pk = 1;             // prime power
    std::vector<std::int64_t> gens;  // generators of (Z/pk)^*
    std::vector<std::int64_t> orders;
    std::vector<std::vector<int>> dlog; // dlog[x], empty marks non-unit (except x=1)
};

std::int64_t pow_mod(std::int64_t base, std::int64_t ex, std::int64_t mod) {
    std::int64_t r = 1;
    base %= mod;
    while (ex) {
        if (ex & 1) r = std::int64_t((__int128)r * base % mod);
        base = std::int64_t((__int128)base * base % mod);
        ex >>= 1;
    }
    return r;
}

UnitGroupFactor unit_group(std::int64_t p, int e) {
    UnitGroupFactor f;
    for (int i = 0; i < e; ++i) f.pk *= p;
    if (f.pk <= 2) {
        // trivial unit group
    } else if (p == 2 && e == 2) {
        f.gens = {3};
        f.orders = {2};
    } else if (p == 2) {
        f.gens = {f.pk - 1, 5};
        f.orders = {2, f.pk / 4};
    } else {
        std::int64_t phi = f.pk / p * (p - 1);
        auto pf = factorize(phi);
        for (std::int64_t g = 2; g < f.pk; ++g) {
            if (std::gcd(g, f.pk) != 1) continue;
            bool primitive = true;
            for (const auto& [q, qe] : pf)
                if (pow_mod(g, phi / q, f.pk) == 1) { primitive = false; break; }
            if (primitive) { f.gens = {g}; f.orders = {phi}; break; }
        }
        if (f.gens.empty()) throw DomainError("no generator found for unit group");
    }
    f.dlog.assign(size_t(f.pk), {});
    std::vector<int> idx(f.gens.size(), 0);
    std::function<void(size_t, std::int64_t)> walk = [&](size_t i, std::int64_t val) {
        if (i == f.gens.size()) {
            f.dlog[size_t(val)] = idx;
            return;
        }
        std::int64_t v = val;
        for (std::int64_t k = 0; k < f.orders[i]; ++k) {
            idx[i] = int(k);
            walk(i + 1, v);
            v = std::int64_t((__int128)v * f.gens[i] % f.pk);
        }
    };
    if (f.pk == 1) {
        f.dlog.assign(1, std::vector<int>{});
    } else {
        walk(0, 1 % f.pk);
    }
    return f;
}

} // namespace

CharacterTable dirichlet_characters(std::int64_t Q) {
    if (Q < 1) throw DomainError("dirichlet_characters needs Q >= 1");
    CharacterTable t;
    t.modulus = Q;
    if (Q == 1) {
        t.characters.assign(1, {cplx(1.0, 0.0)});
        return t;
    }
    auto fac = factorize(Q);
    std::vector<UnitGroupFactor> groups;
    for (const auto& [p, e] : fac) groups.push_back(unit_group(p, e));

    struct GenRef { size_t group; size_t gen; std::int64_t order; };
    std::vector<GenRef> gens;
    for (size_t gi = 0; gi < groups.size(); ++gi)
        for (size_t k = 0; k < groups[gi].gens.size(); ++k)
            gens.push_back({gi, k, groups[gi].orders[k]});

    std::int64_t phi = euler_phi(Q);
    { // sanity: product of generator orders equals phi(Q)
        std::int64_t n = 1;
        for (const auto& g : gens) n *= g.order;
        if (n != phi) throw DomainError("character count mismatch");
    }

    std::vector<std::vector<int>> dl(static_cast<size_t>(Q));
    std::vector<bool> unit(size_t(Q), false);
    for (std::int64_t x = 1; x < Q; ++x) {
        if (std::gcd(x, Q) != 1) continue;
        unit[size_t(x)] = true;
        std::vector<int> v;
        v.reserve(gens.size());
        for (const auto& g : gens) {
            std::int64_t r = x % groups[g.group].pk;
            const auto& d = groups[g.group].dlog[size_t(r)];
            v.push_back(d.empty() ? 0 : d[g.gen]);
        }
        dl[size_t(x)] = std::move(v);
    }

    std::vector<std::int64_t> kvec(gens.size(), 0);
    t.characters.reserve(size_t(phi));
    for (std::int64_t ci = 0; ci < phi; ++ci) {
        std::vector<cplx> vals(size_t(Q), cplx(0.0, 0.0));
        for (std::int64_t x = 1; x < Q; ++x) {
            if (!unit[size_t(x)]) continue;
            // exact rational phase sum_i k_i dlog_i(x) / order_i mod 1
            double frac = 0.0;
            for (size_t i = 0; i < gens.size(); ++i) {
                std::int64_t num = (kvec[i] * dl[size_t(x)][i]) % gens[i].order;
                frac += double(num) / double(gens[i].order);
            }
            frac -= std::floor(frac);
            vals[size_t(x)] = cplx(std::cos(2.0 * PI * frac), std::sin(2.0 * PI * frac));
        }
        t.characters.push_back(std::move(vals));
        for (size_t i = 0; i < gens.size(); ++i) { // odometer; characters[0] stays principal
            if (++kvec[i] < gens[i].order) break;
            kvec[i] = 0;
        }
    }
    return t;
}

} // namespace shiftconv
