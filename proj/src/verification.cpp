#include "pogorelov/verification.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "pogorelov/assembly.hpp"
#include "pogorelov/curvature.hpp"
#include "pogorelov/embedding.hpp"
#include "pogorelov/lemma_lab.hpp"
#include "pogorelov/numerics.hpp"
#include "pogorelov/profile.hpp"
#include "pogorelov/regularity.hpp"
#include "pogorelov/report_io.hpp"

namespace pogorelov
{

namespace
{
using json = nlohmann::ordered_json;

std::string num(double x)
{
    return format_number(x);
}

CheckResult isometry_check()
{
    CheckResult r{1, "isometry of the revolution embedding"};
    auto const start = std::chrono::steady_clock::now();
    auto const p = make_pogorelov_profile(1.0);
    auto const curve = integrate_profile(p, 0.74, 1e-10);
    auto const res = induced_metric_residual(p, curve, {0.0, 0.74, 200, 64});
    double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool const fast = seconds <= 5.0;
    r.pass = res.max() <= 1e-8 && fast;
    r.detail = fmt::format("max|E-1| = {}, max|F| = {}, max|G-f^2| = {} (limit 1e-8), runtime within 5 s: {}",
                           num(res.max_e), num(res.max_f), num(res.max_g), fast ? "yes" : "no");
    r.data = {{"max_E", res.max_e}, {"max_F", res.max_f}, {"max_G", res.max_g}, {"tolerance", 1e-8}};
    return r;
}

CheckResult jump_check()
{
    CheckResult r{2, "z'' jump at a/2"};
    r.pass = true;
    std::vector<std::string> parts;
    r.data = json::array();
    for (double a : {1.0, 0.5, 0.125})
    {
        auto const p = make_pogorelov_profile(a);
        auto const curve = integrate_profile(p, 0.74 * a, 1e-10 * a);
        auto const jump = jump_analysis(curve);
        double const expected = 0.5 * std::sqrt(3.0) * a * a;
        double const rel = std::abs(jump.right_limit - expected) / expected;
        bool const ok = rel <= 1e-3 && jump.left_limit == 0.0 && jump.converged;
        r.pass = r.pass && ok;
        parts.push_back(fmt::format("a={}: right {} vs {} (rel {}), left {}", num(a), num(jump.right_limit),
                                    num(expected), num(rel), num(jump.left_limit)));
        r.data.push_back({{"a", a},
                          {"left", jump.left_limit},
                          {"right", jump.right_limit},
                          {"expected_right", expected},
                          {"rel_error", rel}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult window_check()
{
    CheckResult r{3, "embeddable window endpoints"};
    r.pass = true;
    std::vector<std::string> parts;
    r.data = json::array();
    for (double a : {1.0, 0.1})
    {
        auto const win = embeddable_window(make_pogorelov_profile(a), 1000);
        bool ok = win.size() == 1;
        double err_lo = NAN, err_hi = NAN;
        if (ok)
        {
            err_lo = std::abs(win[0].lo - 0.5 * a);
            err_hi = std::abs(win[0].hi - 0.75 * a);
            ok = err_lo <= 1e-10 * a && err_hi <= 1e-10 * a;
            parts.push_back(fmt::format("a={}: ({}, {}), endpoint errors {} {}", num(a), num(win[0].lo),
                                        num(win[0].hi), num(err_lo), num(err_hi)));
        }
        else
        {
            parts.push_back(fmt::format("a={}: {} intervals", num(a), win.size()));
        }
        r.pass = r.pass && ok;
        r.data.push_back({{"a", a}, {"intervals", static_cast<int>(win.size())}, {"err_lo", err_lo}, {"err_hi", err_hi}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult curvature_identity_check()
{
    CheckResult r{4, "closed-form curvature identity"};
    r.pass = true;
    std::vector<std::string> parts;
    r.data = json::array();
    for (double a : {1.0, 0.5, 0.1})
    {
        auto const p = make_pogorelov_profile(a);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i)
        {
            double const rho = 0.5 * a + 0.5 * a * (i + 0.5) / 1000.0;
            double const kf = gauss_curvature(p, rho);
            double const kc = closed_form_K(a, rho);
            double const scale = std::max(std::abs(kf), std::abs(kc));
            if (scale > 0.0)
            {
                worst = std::max(worst, std::abs(kf - kc) / scale);
            }
        }
        int nonzero_flat = 0;
        for (int i = 0; i <= 1000; ++i)
        {
            if (gauss_curvature(p, 0.5 * a * i / 1000.0) != 0.0)
            {
                ++nonzero_flat;
            }
        }
        bool const ok = worst <= 1e-9 && nonzero_flat == 0;
        r.pass = r.pass && ok;
        parts.push_back(fmt::format("a={}: max rel {} , nonzero K on [0,a/2]: {}", num(a), num(worst), nonzero_flat));
        r.data.push_back({{"a", a}, {"max_rel", worst}, {"nonzero_flat", nonzero_flat}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult expansion_check()
{
    CheckResult r{5, "expansion coefficients"};
    r.pass = true;
    std::vector<std::string> parts;
    r.data = json::array();
    for (double a : {1.0, 0.5})
    {
        auto const fit = expansion_fit(make_pogorelov_profile(a), 1e-3 * a);
        double const c1 = 1.5 * a * a * a;
        auto const series = expansion_series(a, 2);
        double const c2_oracle = series[1];
        double const c2_reference = -21.0 * a * a;
        double const e1 = std::abs(fit.c1 - c1) / c1;
        double const e2 = std::abs(fit.c2 - c2_oracle) / std::abs(c2_oracle);
        bool const ok = e1 <= 1e-2 && e2 <= 2e-2;
        r.pass = r.pass && ok;
        parts.push_back(fmt::format("a={}: c1 {} (expected {}, rel {}), c2 {} (oracle {}, reference {}, rel {})", num(a),
                                    num(fit.c1), num(c1), num(e1), num(fit.c2), num(c2_oracle), num(c2_reference),
                                    num(e2)));
        r.data.push_back({{"a", a},
                          {"c1", fit.c1},
                          {"c1_expected", c1},
                          {"c2", fit.c2},
                          {"c2_oracle", c2_oracle},
                          {"c2_reference", c2_reference}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult lower_bound_check()
{
    CheckResult r{6, "curvature lower bound window"};
    double const eps = lower_bound_window(make_pogorelov_profile(1.0), 0.75);
    r.pass = eps >= 1e-3;
    r.detail = fmt::format("K > (3/4)(rho - 1/2) holds for rho - 1/2 < {} (need >= 1e-3)", num(eps));
    r.data = {{"eps_max", eps}};
    return r;
}

CheckResult layout_check()
{
    CheckResult r{7, "disc layout disjointness"};
    auto const layout = build_layout(1000);
    long overlaps = 0;
    long origin = 0;
    auto const& e = layout.entries;
    for (std::size_t i = 0; i < e.size(); ++i)
    {
        if (std::hypot(e[i].cx, e[i].cy) <= e[i].radius)
        {
            ++origin;
        }
        for (std::size_t j = i + 1; j < e.size(); ++j)
        {
            if (std::hypot(e[i].cx - e[j].cx, e[i].cy - e[j].cy) <= e[i].radius + e[j].radius)
            {
                ++overlaps;
            }
        }
    }
    r.pass = overlaps == 0 && origin == 0;
    r.detail = fmt::format("n_max = 1000: {} intersecting pairs, {} discs containing the origin", overlaps, origin);
    r.data = {{"overlaps", overlaps}, {"contains_origin", origin}};
    return r;
}

CheckResult gluing_check()
{
    CheckResult r{8, "C^2 gluing across disc boundaries"};
    r.pass = true;
    auto const layout = build_layout(20);
    MetricField const field(layout);
    std::vector<std::string> parts;
    r.data = json::array();
    for (int n : {1, 5, 20})
    {
        auto const& d = layout.entries[n - 1];
        auto const norms = estimate_norms(field, n, 64);
        std::array<double, 3> const scale{norms.norms[kSupDev], norms.norms[kSupD1], norms.norms[kSupD2]};
        double worst = 0.0;
        for (double theta : {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi, 2.0, 4.0})
        {
            Eigen::Vector2d const dir(std::cos(theta), std::sin(theta));
            for (int entry = 0; entry < 3; ++entry)
            {
                int const i = entry == 2 ? 1 : 0;
                int const j = entry == 0 ? 0 : 1;
                auto g = [&](double t) {
                    Eigen::Vector2d const pt = Eigen::Vector2d(d.cx, d.cy) + t * dir;
                    return field.disc_jet(n - 1, pt.x(), pt.y()).deviation(i, j);
                };
                for (int order = 0; order <= 2; ++order)
                {
                    auto side = [&](double sign) {
                        if (order == 0)
                        {
                            return g(d.radius + sign * 1e-9 * d.radius);
                        }
                        std::vector<double> est;
                        for (int level = 0; level < 4; ++level)
                        {
                            double const h = 1e-3 * d.radius * std::ldexp(1.0, -level);
                            est.push_back(numerics::one_sided_derivative(g, d.radius, h, order, order + 3, sign));
                        }
                        return numerics::richardson_diagonal(est, 3).back();
                    };
                    double const mismatch = std::abs(side(-1.0) - side(1.0)) / scale[order];
                    worst = std::max(worst, mismatch);
                }
            }
        }
        bool const ok = worst <= 1e-6;
        r.pass = r.pass && ok;
        parts.push_back(fmt::format("n={}: max normalized mismatch {}", n, num(worst)));
        r.data.push_back({{"n", n}, {"max_mismatch", worst}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult decay_check(bool quick)
{
    CheckResult r{9, "norm decay and Cauchy tails"};
    MetricField const field(build_layout(40));
    auto const report = build_norm_report(field, 1, 40, quick ? 64 : 128);
    auto const fits = decay_fit(report, 5, 40);
    auto const tails = cauchy_check(report, 40);
    bool monotone = true;
    for (bool m : tails.monotone)
    {
        monotone = monotone && m;
    }
    r.pass = fits[kSupD2].slope <= -1.0 && fits[kLipD2].slope <= -1.0 && monotone;
    std::vector<std::string> parts;
    json exps = json::array();
    for (auto const& f : fits)
    {
        parts.push_back(fmt::format("{} slope {} [{}, {}] (claimed {})", f.name, num(f.slope), num(f.ci_lo),
                                    num(f.ci_hi), num(f.claimed)));
        exps.push_back({{"norm", f.name},
                        {"measured", f.slope},
                        {"ci_lo", f.ci_lo},
                        {"ci_hi", f.ci_hi},
                        {"claimed", f.claimed},
                        {"claim_within_ci", f.claimed >= f.ci_lo && f.claimed <= f.ci_hi}});
    }
    parts.push_back(fmt::format("tails monotone: {}", monotone ? "yes" : "no"));
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    r.data = {{"exponents", exps}, {"tails_monotone", monotone}};
    return r;
}

CheckResult convex_check(bool quick)
{
    CheckResult r{10, "convex-function bound on generated cases"};
    double const a = 1.0;
    double const c = 0.1;
    int const per_seed = quick ? 20 : 100;
    long total = 0;
    long passed = 0;
    json rows = json::array();
    for (double b : {proof_box_height(a, c), c})
    {
        long acc_attempts = 0;
        long acc_accepted = 0;
        long box_pass = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            GeneratorStats stats;
            auto const cases = generate_convex_cases(seed, per_seed, c, b, &stats);
            acc_attempts += stats.attempts;
            acc_accepted += stats.accepted;
            for (auto const& cc : cases)
            {
                ++total;
                if (convex_bound_check(cc).pass)
                {
                    ++passed;
                    ++box_pass;
                }
            }
        }
        rows.push_back({{"b", b}, {"cases", 10 * per_seed}, {"passed", box_pass},
                        {"acceptance_rate", static_cast<double>(acc_accepted) / acc_attempts}});
    }
    r.pass = total > 0 && passed == total;
    r.detail = fmt::format("{} / {} cases pass at b = 3c^2/a and b = c (c = {})", passed, total, num(c));
    r.data = rows;
    return r;
}

CheckResult ruling_check()
{
    CheckResult r{11, "developable ruling law k = A/(s+B)"};
    struct Case
    {
        RuledSurface surf;
        double t0, v0, v1;
    };
    std::vector<Case> const cases{{make_cone(std::numbers::pi / 6), 0.3, 0.5, 2.0},
                                  {make_cylinder(0.7), 0.3, -1.0, 1.0},
                                  {make_helix_tangent_developable(1.0, 0.5), 0.3, 0.2, 3.0}};
    r.pass = true;
    std::vector<std::string> parts;
    r.data = json::array();
    for (auto const& c : cases)
    {
        auto const sample = sample_ruling(c.surf, c.t0, c.v0, c.v1, 1000);
        auto const fit = ruling_curvature_fit(sample);
        bool const ok = fit.max_residual <= 1e-6 && sample.max_abs_gauss < 1e-8;
        r.pass = r.pass && ok;
        parts.push_back(fmt::format("{}: residual {}, |K| <= {}", c.surf.name, num(fit.max_residual),
                                    num(sample.max_abs_gauss)));
        r.data.push_back({{"surface", c.surf.name},
                          {"max_residual", fit.max_residual},
                          {"slope", fit.slope},
                          {"intercept", fit.intercept}});
    }
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
}

CheckResult sagitta_check()
{
    CheckResult r{12, "sagitta value and bound"};
    auto const s = sagitta(1.0, 0.1);
    // 1/2 - sqrt(0.24) to 25 digits
    double const reference = 0.01010205144336438036054319;
    double const ulp = std::nextafter(reference, 1.0) - reference;
    bool const value_ok = std::abs(s.value - reference) <= 2.0 * ulp;
    int bound_failures = 0;
    for (int i = 1; i <= 100; ++i)
    {
        double const ratio = 0.3 * i / 100.0;
        if (!sagitta(1.0, ratio).below_upper)
        {
            ++bound_failures;
        }
    }
    r.pass = value_ok && bound_failures == 0;
    r.detail = fmt::format("sagitta(1, 0.1) = {} (reference {}), bound failures on c/a in (0, 0.3]: {}",
                           num(s.value), num(reference), bound_failures);
    r.data = {{"value", s.value}, {"reference", reference}, {"bound_failures", bound_failures}};
    return r;
}

}  // namespace

bool VerifyReport::all_pass() const
{
    for (auto const& c : checks)
    {
        if (!c.pass)
        {
            return false;
        }
    }
    return !checks.empty();
}

std::string VerifyReport::to_text() const
{
    std::ostringstream os;
    for (auto const& c : checks)
    {
        os << fmt::format("[{}] {:02d} {}: {}\n", c.pass ? "PASS" : "FAIL", c.id, c.name, c.detail);
    }
    os << fmt::format("{} / {} checks passed{}\n",
                      std::count_if(checks.begin(), checks.end(), [](CheckResult const& c) { return c.pass; }),
                      checks.size(), quick ? " (quick)" : "");
    return os.str();
}

nlohmann::ordered_json VerifyReport::to_json() const
{
    json j;
    j["quick"] = quick;
    j["all_pass"] = all_pass();
    json arr = json::array();
    for (auto const& c : checks)
    {
        arr.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"data", c.data}});
    }
    j["checks"] = arr;
    return j;
}

VerifyReport run_quantitative_checks(VerifyOptions const& opts)
{
    VerifyReport report;
    report.quick = opts.quick;
    report.checks.push_back(isometry_check());
    report.checks.push_back(jump_check());
    report.checks.push_back(window_check());
    report.checks.push_back(curvature_identity_check());
    report.checks.push_back(expansion_check());
    report.checks.push_back(lower_bound_check());
    report.checks.push_back(layout_check());
    report.checks.push_back(gluing_check());
    report.checks.push_back(decay_check(opts.quick));
    report.checks.push_back(convex_check(opts.quick));
    report.checks.push_back(ruling_check());
    report.checks.push_back(sagitta_check());
    return report;
}

VerifyReport run_acceptance(VerifyOptions const& opts)
{
    auto first = run_quantitative_checks(opts);
    auto const second = run_quantitative_checks(opts);
    // Check 1 carries a wall-clock flag; everything else is a pure function.
    std::string const a = dump_json(first.to_json());
    std::string const b = dump_json(second.to_json());
    CheckResult det{13, "determinism of the verification report"};
    det.pass = a == b;
    det.detail = fmt::format("two runs serialize to {} and {} bytes, identical: {}", a.size(), b.size(),
                             det.pass ? "yes" : "no");
    det.data = {{"bytes", static_cast<long>(a.size())}, {"identical", det.pass}};
    first.checks.push_back(det);
    return first;
}

}  // namespace pogorelov
