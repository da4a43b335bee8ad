// Batch driver: runs kernel/series evaluations, verification suites and scans
// from a JSON config, emitting CSV/JSON plus a run manifest.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftconv/amplifier.hpp"
#include "shiftconv/doubleseries.hpp"
#include "shiftconv/dseries.hpp"
#include "shiftconv/eisenstein.hpp"
#include "shiftconv/emit.hpp"
#include "shiftconv/forms.hpp"
#include "shiftconv/kernel.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/specfun.hpp"
#include "shiftconv/sums.hpp"

using namespace shiftconv;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t json_hash(const json& j) {
    // FNV-1a over the canonical dump
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunContext {
    json config;
    std::string output = "out.csv";
    std::string format = "csv";
    std::uint64_t seed = 1;
    json manifest_extra;
};

void write_manifest(const RunContext& ctx, double wall_seconds) {
    json m;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)json_hash(ctx.config));
    m["config_hash"] = hex;
    m["tool_version"] = kVersion;
    m["seed"] = ctx.seed;
    m["wall_seconds"] = wall_seconds;
    m["parameters"] = ctx.manifest_extra;
    std::ofstream out(ctx.output + ".manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
}

double jget(const json& j, const std::string& key, double def) {
    return j.contains(key) ? j[key].get<double>() : def;
}
std::int64_t jgeti(const json& j, const std::string& key, std::int64_t def) {
    return j.contains(key) ? j[key].get<std::int64_t>() : def;
}

const CoefficientTable& delta_table(std::int64_t M) {
    static CoefficientTable t;
    if (t.size() < M) t = delta_coefficients(M);
    return t;
}

int run_kernel(RunContext& ctx) {
    const json& p = ctx.config["params"];
    double delta = jget(p, "delta", 0.5);
    double t_spec = jget(p, "t", 0.0);
    std::string regime = p.contains("regime") ? p["regime"].get<std::string>() : "all";
    ResultTable tab;
    tab.columns = {"s_re", "s_im", "t", "delta", "value_re", "value_im", "err_estimate", "regime_id"};
    auto add = [&](const KernelValue& v, const cplx& s) {
        tab.rows.push_back({s.real(), s.imag(), t_spec, delta, v.value.real(), v.value.imag(),
                            v.err_estimate, double(int(v.regime))});
    };
    std::vector<cplx> points;
    if (p.contains("grid")) {
        const json& g = p["grid"];
        double lo = g["s_re_min"], hi = g["s_re_max"];
        int n = g["n"];
        for (int i = 0; i < n; ++i)
            points.emplace_back(lo + (hi - lo) * i / std::max(1, n - 1), jget(p, "s_im", 0.0));
    } else {
        points.emplace_back(jget(p, "s_re", 2.0), jget(p, "s_im", 0.0));
    }
    for (const cplx& s : points) {
        KernelQuery q;
        q.s = s;
        q.z = cplx(0.0, t_spec);
        q.delta = delta;
        if (regime == "quadrature" || regime == "all") add(m_quadrature(q), s);
        if (regime == "hypergeom" || regime == "all") add(m_hypergeom(q), s);
        if (regime == "barnes" || regime == "all") add(m_barnes(q), s);
        if (regime == "limit") {
            cplx v = m_limit(s, q.z);
            tab.rows.push_back({s.real(), s.imag(), t_spec, 0.0, v.real(), v.imag(), 0.0, 3.0});
        }
    }
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["delta"] = delta;
    ctx.manifest_extra["regime"] = regime;
    ctx.manifest_extra["points"] = points.size();
    return 0;
}

int run_dseries(RunContext& ctx) {
    const json& p = ctx.config["params"];
    DSeriesQuery q;
    q.s = cplx(jget(p, "s_re", 2.0), jget(p, "s_im", 0.0));
    q.sp.h = jgeti(p, "h", 1);
    q.sp.l1 = jgeti(p, "l1", 1);
    q.sp.l2 = jgeti(p, "l2", 1);
    q.delta = jget(p, "delta", 0.0);
    q.M = jgeti(p, "M", 5000);
    std::int64_t need = (q.M * q.sp.l2 + q.sp.h) / q.sp.l1 + 2;
    const auto& tbl = delta_table(std::max(q.M + 2, need));
    q.f = &tbl;
    q.g = &tbl;
    TruncatedValue v = d_truncated(q);
    ResultTable tab;
    tab.columns = {"s_re", "s_im", "h", "delta", "M", "value_re", "value_im", "tail_bound"};
    tab.rows.push_back({q.s.real(), q.s.imag(), double(q.sp.h), q.delta, double(q.M),
                        v.value.real(), v.value.imag(), v.tail_bound});
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["M"] = q.M;
    ctx.manifest_extra["tail_bound"] = v.tail_bound;
    return 0;
}

int run_poincare_check(RunContext& ctx) {
    const json& p = ctx.config["params"];
    ShiftParams sp;
    sp.h = jgeti(p, "h", 1);
    TruncationWindow w{jget(p, "Y", 10.0), jget(p, "delta", 0.5)};
    cplx s(jget(p, "s_re", 2.0), 0.0);
    std::int64_t M = jgeti(p, "M", 1500);
    int grid_n = int(jgeti(p, "grid_n", 40));
    const auto& f = delta_table(std::max<std::int64_t>(3000, M * 2));
    TruncatedValue unfolded = unfolded_inner(s, sp, w, f, f, M);
    auto P = [&](const UpperHalfPoint& z) { return poincare_value(z, s, sp, w); };
    auto V = [&](const UpperHalfPoint& z) { return v_product(z, f, f, 1, 1, 60); };
    cplx fd = petersson_inner_fd(P, V, 1, grid_n);
    double rel = std::abs(fd - unfolded.value) / std::abs(unfolded.value);
    ResultTable tab;
    tab.columns = {"unfolded_re", "unfolded_im", "fd_re", "fd_im", "rel_deviation"};
    tab.rows.push_back({unfolded.value.real(), unfolded.value.imag(), fd.real(), fd.imag(), rel});
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["Y"] = w.Y;
    ctx.manifest_extra["delta"] = w.delta;
    ctx.manifest_extra["grid_n"] = grid_n;
    std::printf("poincare-check: rel deviation %.3g\n", rel);
    return rel < 1e-3 ? 0 : 3;
}

int run_eisenstein_check(RunContext& ctx) {
    const json& p = ctx.config["params"];
    std::int64_t N = jgeti(p, "N", 6);
    std::int64_t C_max = jgeti(p, "C_max", 2000);
    std::int64_t n_max = jgeti(p, "n_max", 10);
    cplx s(jget(p, "s_re", 1.5), 0.0);
    double worst = 0.0;
    ResultTable tab;
    tab.columns = {"w", "n", "direct_re", "closed_re", "deviation"};
    for (std::int64_t w : divisors_of(N)) {
        CuspLabel cusp{w};
        for (std::int64_t n = 1; n <= n_max; ++n) {
            cplx d = rho_direct(s, n, cusp, N, C_max).value;
            cplx c = rho_closed(s, n, cusp, N);
            double dev = std::abs(d - c);
            worst = std::max(worst, dev);
            tab.rows.push_back({double(w), double(n), d.real(), c.real(), dev});
        }
    }
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["C_max"] = C_max;
    ctx.manifest_extra["worst_deviation"] = worst;
    std::printf("eisenstein-check: worst deviation %.3g\n", worst);
    return worst < 1e-6 ? 0 : 3;
}

int run_zq(RunContext& ctx) {
    const json& p = ctx.config["params"];
    ZqQuery q;
    q.s = cplx(jget(p, "s_re", 2.0), jget(p, "s_im", 0.0));
    q.w = cplx(jget(p, "w_re", 2.0), jget(p, "w_im", 0.0));
    q.sp.Q = jgeti(p, "Q", 1);
    q.sp.l1 = jgeti(p, "l1", 1);
    q.sp.l2 = jgeti(p, "l2", 1);
    q.M2_max = jgeti(p, "M2_max", 500);
    q.H_max = jgeti(p, "H_max", 500);
    std::int64_t need = (q.sp.l2 * q.M2_max + q.H_max * q.sp.Q) / q.sp.l1 + 2;
    const auto& tbl = delta_table(std::max(q.M2_max + 2, need));
    q.f = &tbl;
    q.g = &tbl;
    TruncatedValue v = zq_truncated(q);
    SPieces pieces = s_decomposition(q, 0);
    ResultTable tab;
    tab.columns = {"value_re", "value_im", "S1_re", "S2_re", "S3_re", "S4_re",
                   "S5_re", "S6_re", "S7_re", "S8_re"};
    tab.rows.push_back({v.value.real(), v.value.imag(), pieces.S1.real(), pieces.S2.real(),
                        pieces.S3.real(), pieces.S4.real(), pieces.S5.real(), pieces.S6.real(),
                        pieces.S7.real(), pieces.S8.real()});
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["box"] = {q.M2_max, q.H_max};
    return 0;
}

int run_shifted_scan(RunContext& ctx) {
    const json& p = ctx.config["params"];
    std::int64_t h = jgeti(p, "h", 1);
    int emin = int(jgeti(p, "x_min_pow2", 10));
    int emax = int(jgeti(p, "x_max_pow2", 17));
    bool control = p.contains("control") && p["control"].get<bool>();
    std::vector<double> xs;
    for (int e = emin; e <= emax; ++e) xs.push_back(std::pow(2.0, e));
    ShiftParams sp;
    sp.h = h;
    BumpProfile prof;
    std::int64_t need = std::int64_t(2.0 * xs.back()) + h + 2;
    ScanReport rep;
    if (control) {
        CoefficientTable ones;
        ones.spec.weight = 12;
        ones.a.assign(size_t(need) + 1, cplx(0.0, 0.0));
        for (size_t m = 1; m < ones.a.size(); ++m)
            ones.a[m] = cplx(std::pow(double(m), 5.5), 0.0);
        rep = cancellation_scan({h}, xs, false, sp, ones, ones, prof, ctx.seed);
    } else {
        const auto& tbl = delta_table(need);
        rep = cancellation_scan({h}, xs, false, sp, tbl, tbl, prof, ctx.seed);
    }
    ResultTable tab;
    tab.columns = {"x", "h", "S_re", "S_im", "absS", "logx", "logabsS"};
    for (const auto& r : rep.rows) {
        double a = std::abs(r.S);
        tab.rows.push_back({r.x, double(r.h), r.S.real(), r.S.imag(), a, std::log(r.x),
                            a > 0.0 ? std::log(a) : -1e300});
    }
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["slope"] = rep.slope;
    ctx.manifest_extra["bootstrap_sd"] = rep.bootstrap_sd;
    ctx.manifest_extra["zeros_excluded"] = rep.zeros_excluded;
    std::printf("shifted-scan: slope %.4f (sd %.4f)\n", rep.slope, rep.bootstrap_sd);
    return 0;
}

int run_amplify(RunContext& ctx) {
    const json& p = ctx.config["params"];
    std::int64_t qmin = jgeti(p, "Q_min", 11), qmax = jgeti(p, "Q_max", 101);
    std::vector<std::int64_t> qs;
    for (std::int64_t q = qmin; q <= qmax; ++q) {
        bool prime = q >= 2;
        for (std::int64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) { prime = false; break; }
        if (prime) qs.push_back(q);
    }
    const auto& tbl = delta_table(2 * qmax + 2);
    BumpProfile prof;
    TrendReport rep = subconvexity_scan(qs, tbl, prof);
    ResultTable tab;
    tab.columns = {"Q", "x", "S", "proxy", "logQ", "logproxy"};
    for (const auto& r : rep.rows)
        tab.rows.push_back({double(r.Q), r.x, r.S, r.proxy, std::log(double(r.Q)),
                            std::log(std::max(r.proxy, 1e-300))});
    emit(tab, ctx.format, ctx.output);
    ctx.manifest_extra["slope"] = rep.slope;
    std::printf("amplify: proxy slope %.4f\n", rep.slope);
    return 0;
}

int run_verify(RunContext& ctx, const std::string& suite) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, double dev) {
        std::printf("[%s] %s (deviation %.3g)\n", ok ? "PASS" : "FAIL", name.c_str(), dev);
        if (!ok) ++failures;
    };
    if (suite == "kernel" || suite == "all") {
        KernelQuery q;
        q.s = cplx(2.0, 0.0);
        q.delta = 2.0;
        double expect = std::pow(PI, 1.5) / (8.0 * std::sqrt(2.0));
        double dev = std::abs(m_quadrature(q).value.real() - expect);
        report("kernel closed-form anchor", dev < 1e-10, dev);
        std::mt19937_64 rng(ctx.seed);
        std::uniform_real_distribution<double> us(0.6, 2.0), ut(-5.0, 5.0), ud(0.1, 0.9);
        double worst = 0.0;
        for (int i = 0; i < 12; ++i) {
            KernelQuery r;
            r.s = cplx(us(rng), 0.0);
            r.z = cplx(0.0, ut(rng));
            r.delta = ud(rng);
            cplx a = m_quadrature(r).value, b = m_hypergeom(r).value;
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
        }
        report("kernel regime agreement (sample)", worst < 1e-8, worst);
    }
    if (suite == "poincare" || suite == "all") {
        RunContext sub = ctx;
        sub.config["params"] = json::object();
        sub.output = ctx.output + ".poincare.csv";
        int rc = run_poincare_check(sub);
        report("poincare unfolding identity", rc == 0, 0.0);
    }
    if (suite == "eisenstein" || suite == "all") {
        CuspLabel a{1};
        double dev = std::abs(rho_direct(cplx(1.5, 0.0), 3, a, 1, 2000).value -
                              rho_closed(cplx(1.5, 0.0), 3, a, 1));
        report("eisenstein closed form", dev < 1e-6, dev);
    }
    if (suite == "sieve" || suite == "all") {
        const auto& tbl = delta_table(3000);
        ZqQuery q;
        q.s = cplx(2.0, 0.0);
        q.w = cplx(2.0, 0.0);
        q.sp.Q = 5;
        q.M2_max = 400;
        q.H_max = 80;
        q.f = &tbl;
        q.g = &tbl;
        SieveReport rep = s5_sieve_check(q, 0);
        report("character sieve", rep.character_deviation < 1e-10, rep.character_deviation);
        report("mobius sieve", rep.mobius_deviation < 1e-10, rep.mobius_deviation);
    }
    if (suite == "sums" || suite == "all") {
        auto [lhs, rhs] = mellin_beta_identity(cplx(5.5, 0.0), 0.7, 2.0);
        double dev = std::abs(lhs - rhs);
        report("beta-kernel Mellin identity", dev < 1e-10, dev);
    }
    if (suite == "amplifier" || suite == "all") {
        const auto& tbl = delta_table(256);
        BumpProfile prof;
        AmplifierConfig cfg;
        cfg.Q = 13;
        cfg.L = 5.0;
        cfg.prime_list = {5, 7};
        cfg.chi_index = 1;
        ParsevalResult r = parseval_decompose(cfg, 20.0, tbl, prof);
        report("parseval identity", r.deviation < 1e-10 * (1.0 + r.lhs), r.deviation);
    }
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shifted-convolution numerics driver"};
    app.require_subcommand(1);

    std::string config_path, output, format = "csv", suite = "all";
    std::int64_t seed = 1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--output", output, "output path");
    app.add_option("--format", format, "csv or json");
    app.add_option("--seed", seed, "seed for randomized test points");

    auto* c_kernel = app.add_subcommand("kernel", "evaluate the kernel M(s,t,delta)");
    auto* c_dseries = app.add_subcommand("dseries", "truncated shifted Dirichlet series");
    auto* c_poincare = app.add_subcommand("poincare-check", "unfolding identity check");
    auto* c_eis = app.add_subcommand("eisenstein-check", "Eisenstein coefficient identities");
    auto* c_zq = app.add_subcommand("zq", "double Dirichlet series box sums");
    auto* c_scan = app.add_subcommand("shifted-scan", "cancellation scan of smoothed sums");
    auto* c_amp = app.add_subcommand("amplify", "amplified character-family scan");
    auto* c_verify = app.add_subcommand("verify", "run a verification suite");
    c_verify->add_option("--suite", suite, "kernel|poincare|eisenstein|sieve|sums|amplifier|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunContext ctx;
    ctx.seed = std::uint64_t(seed);
    ctx.format = format;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "config error: cannot open %s\n", config_path.c_str());
            return 2;
        }
        try {
            ctx.config = json::parse(in);
        } catch (const json::parse_error& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }
    if (!ctx.config.contains("params")) ctx.config["params"] = json::object();
    if (ctx.config.contains("seed") && seed == 1) ctx.seed = ctx.config["seed"].get<std::uint64_t>();
    if (ctx.config.contains("format") && format == "csv")
        ctx.format = ctx.config["format"].get<std::string>();
    if (!output.empty())
        ctx.output = output;
    else if (ctx.config.contains("output_path"))
        ctx.output = ctx.config["output_path"].get<std::string>();

    auto t0 = std::chrono::steady_clock::now();
    int rc = 2;
    try {
        if (c_kernel->parsed()) rc = run_kernel(ctx);
        else if (c_dseries->parsed()) rc = run_dseries(ctx);
        else if (c_poincare->parsed()) rc = run_poincare_check(ctx);
        else if (c_eis->parsed()) rc = run_eisenstein_check(ctx);
        else if (c_zq->parsed()) rc = run_zq(ctx);
        else if (c_scan->parsed()) rc = run_shifted_scan(ctx);
        else if (c_amp->parsed()) rc = run_amplify(ctx);
        else if (c_verify->parsed()) rc = run_verify(ctx, suite);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const IoError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const GapError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const NoDataError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(ctx, wall);
    return rc;
}
