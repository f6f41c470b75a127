// Command-line front end: one subcommand per module plus the acceptance suite.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "pogorelov/assembly.hpp"
#include "pogorelov/curvature.hpp"
#include "pogorelov/embedding.hpp"
#include "pogorelov/errors.hpp"
#include "pogorelov/lemma_lab.hpp"
#include "pogorelov/profile.hpp"
#include "pogorelov/regularity.hpp"
#include "pogorelov/report_io.hpp"
#include "pogorelov/verification.hpp"

namespace
{
using json = nlohmann::ordered_json;
using namespace pogorelov;

constexpr char const* kVersion = "1.0.0";

struct Params
{
    double a = 1.0;
    double rho_max = NAN;  // resolved to 3a/4 - 1e-3 a
    int n_theta = 128;
    int grid = 200;
    double tol = 1e-10;
    int n_max = 40;
    std::uint64_t seed = 1;
    std::string format;
    std::string out;
    bool quick = false;
    bool check_closed_form = false;
};

std::string sha256_hex(std::string const& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i)
    {
        hex += fmt::format("{:02x}", md[i]);
    }
    return hex;
}

class Outputs
{
  public:
    void write(std::string const& path, std::string const& bytes)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
        {
            throw ConfigurationError("cannot open output file " + path);
        }
        f << bytes;
        digests_.push_back({{"path", path}, {"sha256", sha256_hex(bytes)}});
    }
    json const& digests() const { return digests_; }

  private:
    json digests_ = json::array();
};

void write_manifest(std::string const& subcommand, Params const& p, Outputs const& outs)
{
    json m;
    m["subcommand"] = subcommand;
    m["version"] = kVersion;
    m["seed"] = p.seed;
    m["parameters"] = {{"a", p.a},
                       {"rho_max", p.rho_max},
                       {"n_theta", p.n_theta},
                       {"grid", p.grid},
                       {"tol", p.tol},
                       {"n_max", p.n_max},
                       {"format", p.format},
                       {"out", p.out},
                       {"quick", p.quick},
                       {"check_closed_form", p.check_closed_form}};
    m["outputs"] = outs.digests();
    std::ofstream f(p.out + ".manifest.json", std::ios::binary);
    f << dump_json(m);
}

void require_format(Params const& p, std::vector<std::string> const& allowed)
{
    if (std::find(allowed.begin(), allowed.end(), p.format) == allowed.end())
    {
        throw ConfigurationError(fmt::format("format '{}' not available here (use {})", p.format,
                                             fmt::join(allowed, ", ")));
    }
}

int run_profile(Params const& p, Outputs& outs)
{
    require_format(p, {"csv", "json"});
    auto const prof = make_pogorelov_profile(p.a);
    std::ostringstream os;
    if (p.format == "csv")
    {
        os << "rho,f,df,d2f,d3f\n";
        for (int i = 0; i < p.grid; ++i)
        {
            double const rho = p.a * i / p.grid;
            os << format_number(rho);
            for (int k = 0; k <= 3; ++k)
            {
                os << ',' << format_number(prof.eval(rho, k));
            }
            os << '\n';
        }
    }
    else
    {
        auto const rep = smoothness_report(prof, 0.5 * p.a, 1e-4 * p.a);
        json orders = json::array();
        for (auto const& o : rep.orders)
        {
            orders.push_back({{"order", o.order},
                              {"exact_left", o.exact_left},
                              {"exact_right", o.exact_right},
                              {"fd_left", o.fd_left},
                              {"fd_right", o.fd_right},
                              {"jump", o.jump}});
        }
        json windows = json::array();
        for (auto const& w : embeddable_window(prof, std::max(p.grid, 100)))
        {
            windows.push_back({{"lo", w.lo}, {"hi", w.hi}});
        }
        json j{{"a", p.a}, {"rho0", rep.rho0}, {"orders", orders}, {"embeddable_window", windows}};
        dump_json(j, os);
        os << '\n';
    }
    outs.write(p.out, os.str());
    return 0;
}

int run_curvature(Params const& p, Outputs& outs)
{
    require_format(p, {"csv"});
    auto const prof = make_pogorelov_profile(p.a);
    std::vector<double> rhos;
    for (int i = 0; i < p.grid; ++i)
    {
        rhos.push_back(p.a * (i + 0.5) / p.grid);
    }
    auto const samples = curvature_samples(prof, rhos);
    std::ostringstream os;
    os << "rho,K_formula,K_closed,K_fd,abs_err\n";
    for (auto const& s : samples)
    {
        os << fmt::format("{},{},{},{},{}\n", format_number(s.rho), format_number(s.k_formula),
                          format_number(s.k_closed), format_number(s.k_fd), format_number(s.abs_err));
    }
    outs.write(p.out, os.str());
    if (p.check_closed_form)
    {
        double worst = 0.0;
        for (auto const& s : samples)
        {
            double const scale = std::max(std::abs(s.k_formula), std::abs(s.k_closed));
            if (!std::isnan(s.k_closed) && scale > 0.0)
            {
                worst = std::max(worst, std::abs(s.k_formula - s.k_closed) / scale);
            }
        }
        std::cout << "max relative discrepancy between -f''/f and the closed form: " << format_number(worst)
                  << '\n';
        return worst <= 1e-9 ? 0 : 1;
    }
    return 0;
}

int run_embed(Params const& p, Outputs& outs)
{
    require_format(p, {"obj", "csv", "json"});
    auto const prof = make_pogorelov_profile(p.a);
    auto const curve = integrate_profile(prof, p.rho_max, p.tol * p.a);
    std::ostringstream os;
    if (p.format == "csv")
    {
        write_curve_csv(curve, os);
    }
    else if (p.format == "obj")
    {
        write_obj(build_mesh(curve, p.n_theta), os);
    }
    else
    {
        auto const mesh = build_mesh(curve, p.n_theta);
        auto const jump = jump_analysis(curve);
        auto const res = induced_metric_residual(prof, curve, {0.0, p.rho_max, 200, 64});
        auto const mean = mean_curvature_scan(mesh);
        json j{{"a", p.a},
               {"rho_max", p.rho_max},
               {"z_end", curve.samples.back().z},
               {"quadrature_error_estimate", curve.error_estimate},
               {"euler_characteristic", euler_characteristic(mesh)},
               {"jump", {{"location", jump.location}, {"left", jump.left_limit}, {"right", jump.right_limit}}},
               {"metric_residual", {{"E", res.max_e}, {"F", res.max_f}, {"G", res.max_g}}},
               {"mean_curvature_sign", to_string(mean.sign)}};
        if (mean.sign_change)
        {
            j["mean_curvature_sign_change"] = *mean.sign_change;
        }
        dump_json(j, os);
        os << '\n';
    }
    outs.write(p.out, os.str());
    return 0;
}

int run_assemble(Params const& p, Outputs& outs)
{
    require_format(p, {"json", "csv"});
    auto layout = build_layout(p.n_max);
    std::ostringstream os;
    if (p.format == "json")
    {
        write_layout_json(layout, os);
    }
    else
    {
        MetricField const field(std::move(layout));
        write_metric_grid_csv(field, p.grid, p.grid, os);
    }
    outs.write(p.out, os.str());
    return 0;
}

int run_regularity(Params const& p, Outputs& outs)
{
    require_format(p, {"csv", "json"});
    MetricField const field(build_layout(p.n_max));
    auto const report = build_norm_report(field, 1, p.n_max, p.grid);
    std::ostringstream os;
    if (p.format == "csv")
    {
        write_norm_csv(report, os);
    }
    else
    {
        json fits = json::array();
        for (auto const& f : decay_fit(report, std::min(5, p.n_max - 4), p.n_max))
        {
            fits.push_back({{"norm", f.name},
                            {"measured", f.slope},
                            {"ci_lo", f.ci_lo},
                            {"ci_hi", f.ci_hi},
                            {"max_residual", f.max_residual},
                            {"claimed", f.claimed},
                            {"claim_within_ci", f.claimed >= f.ci_lo && f.claimed <= f.ci_hi}});
        }
        auto const tails = cauchy_check(report, p.n_max);
        json mono = json::array();
        for (bool b : tails.monotone)
        {
            mono.push_back(b);
        }
        json flagged = json::array();
        for (auto const& r : report.rows)
        {
            if (r.flagged)
            {
                flagged.push_back(r.n);
            }
        }
        json j{{"n_max", p.n_max}, {"grid", p.grid}, {"exponents", fits}, {"tails_monotone", mono},
               {"unresolved_discs", flagged}};
        dump_json(j, os);
        os << '\n';
    }
    outs.write(p.out, os.str());
    return 0;
}

int run_lemmas(Params const& p, Outputs& outs)
{
    require_format(p, {"json"});
    double const c = 0.1 * p.a;
    json boxes = json::array();
    json failures = json::array();
    bool ok = true;
    for (double b : {proof_box_height(p.a, c), c})
    {
        GeneratorStats stats;
        auto const cases = generate_convex_cases(p.seed, p.quick ? 20 : 100, c, b, &stats);
        int passed = 0;
        double worst_margin = -INFINITY;
        for (auto const& cc : cases)
        {
            auto const chk = convex_bound_check(cc);
            worst_margin = std::max(worst_margin, chk.lhs - chk.rhs);
            if (chk.pass)
            {
                ++passed;
            }
            else
            {
                failures.push_back(archive_case(cc, &chk));
            }
        }
        ok = ok && passed == static_cast<int>(cases.size());
        boxes.push_back({{"b", b},
                         {"cases", cases.size()},
                         {"passed", passed},
                         {"largest_lhs_minus_rhs", worst_margin},
                         {"acceptance_rate", static_cast<double>(stats.accepted) / stats.attempts}});
    }

    json rulings = json::array();
    for (auto const& surf : {make_cone(0.5), make_cylinder(0.7), make_helix_tangent_developable(1.0, 0.5)})
    {
        auto const fit = ruling_curvature_fit(sample_ruling(surf, 0.3, 0.5, 2.0, p.grid));
        ok = ok && fit.max_residual <= 1e-6;
        rulings.push_back({{"surface", surf.name}, {"A", fit.A}, {"B", fit.B}, {"max_residual", fit.max_residual}});
    }

    auto const s = sagitta(p.a, c);
    json j{{"a", p.a},
           {"c", c},
           {"seed", p.seed},
           {"convex_bound", boxes},
           {"ruling_law", rulings},
           {"sagitta", {{"value", s.value}, {"above_lower", s.above_lower}, {"below_upper", s.below_upper}}},
           {"failing_cases", failures}};
    std::ostringstream os;
    dump_json(j, os);
    os << '\n';
    outs.write(p.out, os.str());
    return ok ? 0 : 1;
}

int run_verify(Params const& p, Outputs& outs)
{
    require_format(p, {"json"});
    auto const report = run_acceptance({p.quick});
    std::cout << report.to_text();
    outs.write(p.out, dump_json(report.to_json()));
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pogorelov C^{2,1} metric construction and numerical checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Params p;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--a", p.a, "profile parameter a")->capture_default_str();
        sub->add_option("--format", p.format, "output format")->check(CLI::IsMember({"csv", "json", "obj"}));
        sub->add_option("--out", p.out, "output path (default <subcommand>.<format>)");
    };

    auto* profile = app.add_subcommand("profile", "profile samples (csv) or smoothness at a/2 (json)");
    add_common(profile);
    profile->add_option("--grid", p.grid, "number of samples")->capture_default_str();

    auto* curvature = app.add_subcommand("curvature", "Gaussian curvature table");
    add_common(curvature);
    curvature->add_option("--grid", p.grid, "number of samples")->capture_default_str();
    curvature->add_flag("--check-closed-form", p.check_closed_form, "report the closed-form discrepancy");

    auto* embed = app.add_subcommand("embed", "surface of revolution (obj, csv curve, json summary)");
    add_common(embed);
    embed->add_option("--rho-max", p.rho_max, "outer radius (default 3a/4 - 1e-3 a)");
    embed->add_option("--n-theta", p.n_theta, "angular samples")->capture_default_str();
    embed->add_option("--tol", p.tol, "quadrature tolerance relative to a")->capture_default_str();

    auto* assemble = app.add_subcommand("assemble", "disc layout (json) or metric grid (csv)");
    add_common(assemble);
    assemble->add_option("--n-max", p.n_max, "number of discs")->capture_default_str();
    assemble->add_option("--grid", p.grid, "grid points per axis for csv")->capture_default_str();

    auto* regularity = app.add_subcommand("regularity", "norms of the disc metrics and decay fits");
    add_common(regularity);
    regularity->add_option("--n-max", p.n_max, "last disc")->capture_default_str();
    regularity->add_option("--grid", p.grid, "polar grid size per disc")->capture_default_str();

    auto* lemmas = app.add_subcommand("lemmas", "convex bound, ruling law and sagitta experiments");
    add_common(lemmas);
    lemmas->add_option("--seed", p.seed, "generator seed")->capture_default_str();
    lemmas->add_option("--grid", p.grid, "samples per ruling")->capture_default_str();
    lemmas->add_flag("--quick", p.quick, "20 convex cases per box instead of 100");

    auto* verify = app.add_subcommand("verify", "acceptance suite");
    add_common(verify);
    verify->add_flag("--quick", p.quick, "reduced resolution");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    std::string const name = sub->get_name();
    if (p.format.empty())
    {
        p.format = name == "embed"                                    ? "obj"
                   : (name == "curvature" || name == "regularity")   ? "csv"
                   : name == "profile"                               ? "csv"
                                                                      : "json";
    }
    if (std::isnan(p.rho_max))
    {
        p.rho_max = 0.75 * p.a - 1e-3 * p.a;
    }
    if (p.out.empty())
    {
        p.out = name + "." + p.format;
    }

    Outputs outs;
    int code = 0;
    try
    {
        if (p.grid < 1 || p.n_theta < 1 || p.n_max < 1 || !(p.tol > 0))
        {
            throw ConfigurationError("grid, n-theta, n-max and tol must be positive");
        }
        if (name == "profile")
            code = run_profile(p, outs);
        else if (name == "curvature")
            code = run_curvature(p, outs);
        else if (name == "embed")
            code = run_embed(p, outs);
        else if (name == "assemble")
            code = run_assemble(p, outs);
        else if (name == "regularity")
            code = run_regularity(p, outs);
        else if (name == "lemmas")
            code = run_lemmas(p, outs);
        else
            code = run_verify(p, outs);
    }
    catch (std::invalid_argument const& e)  // ConfigurationError, RejectedInputError
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (std::domain_error const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    write_manifest(name, p, outs);
    return code;
}
