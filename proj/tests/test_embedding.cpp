#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pogorelov/curvature.hpp"
#include "pogorelov/embedding.hpp"
#include "pogorelov/errors.hpp"

using namespace pogorelov;

namespace
{
// Composite 5-point Gauss-Legendre on [lo, hi] with n panels.
template <class F>
double gauss_legendre(F const& g, double lo, double hi, int n)
{
    static constexpr double x[5] = {0.0, 0.53846931010568309104, -0.53846931010568309104, 0.90617984593866399280,
                                    -0.90617984593866399280};
    static constexpr double w[5] = {0.56888888888888888889, 0.47862867049936646804, 0.47862867049936646804,
                                    0.23692688505618908751, 0.23692688505618908751};
    double sum = 0;
    double const h = (hi - lo) / n;
    for (int i = 0; i < n; ++i)
    {
        double const mid = lo + (i + 0.5) * h;
        for (int k = 0; k < 5; ++k)
        {
            sum += 0.5 * h * w[k] * g(mid + 0.5 * h * x[k]);
        }
    }
    return sum;
}

// mpmath, 30 digits
constexpr double kZ074 = 0.01016253072112636335616569;
// root of k_m + k_c for a = 1, mpmath
constexpr double kMeanSignChange = 0.653281024591169226;
}  // namespace

TEST_CASE("profile curve values")
{
    auto const p = make_pogorelov_profile(1.0);
    auto const c = integrate_profile(p, 0.74, 1e-12);
    CHECK(c.z_at(0.5) == 0.0);
    CHECK(c.z_at(0.3) == 0.0);

    auto slope = [&](double x) {
        double const d = p.deviation(x, 1);
        return std::sqrt(-d * (2 + d));
    };
    double const oracle = gauss_legendre(slope, 0.5, 0.74, 10000);
    CHECK(std::abs(oracle - kZ074) < 1e-15);
    CHECK(std::abs(c.samples.back().z - oracle) < 1e-12);
    CHECK(c.samples.back().rho == 0.74);

    for (double u : {1e-5, 1e-4, 1e-3})
    {
        CHECK(meridian_slope(p, 0.5 + u) == doctest::Approx(0.5 * std::sqrt(3.0) * u).epsilon(0.05));
    }
}

TEST_CASE("profile curve invariants")
{
    auto const p = make_pogorelov_profile(1.0);
    double const tol = 1e-10;
    auto const c1 = integrate_profile(p, 0.74, tol);
    auto const c2 = integrate_profile(p, 0.74, 0.5 * tol);
    CHECK(std::abs(c1.samples.back().z - c2.samples.back().z) <= std::max(c1.error_estimate, 1e-15));
    CHECK(c1.error_estimate <= tol);

    for (auto const& s : c1.samples)
    {
        double const fp = p.eval(s.rho, 1);
        CHECK(std::abs(s.dz * s.dz + fp * fp - 1.0) <= 2 * tol);
        CHECK(s.r == p.eval(s.rho, 0));
    }

    // C^1 but not C^2 at a/2
    CHECK(meridian_slope(p, 0.5, Side::left) == 0.0);
    CHECK(meridian_slope(p, 0.5, Side::right) == 0.0);
    auto const jump = jump_analysis(c1);
    CHECK(jump.location == 0.5);
    CHECK(jump.left_limit == 0.0);
    CHECK(jump.converged);
    CHECK(jump.right_limit == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("profile curve errors")
{
    auto const p = make_pogorelov_profile(1.0);
    CHECK_THROWS_AS(integrate_profile(p, 0.75, 1e-10), DomainError);
    CHECK_THROWS_AS(integrate_profile(p, 0.9, 1e-10), DomainError);
    CHECK_THROWS_AS(integrate_profile(p, -0.1, 1e-10), DomainError);
    CHECK(embeddable_limit(p) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("jump scales with a^2")
{
    for (double a : {0.5, 0.125})
    {
        auto const jump = jump_analysis(integrate_profile(make_pogorelov_profile(a), 0.74 * a, 1e-10 * a));
        CHECK(jump.left_limit == 0.0);
        CHECK(jump.right_limit == doctest::Approx(0.5 * std::sqrt(3.0) * a * a).epsilon(1e-3));
    }
}

TEST_CASE("mesh topology")
{
    auto const p = make_pogorelov_profile(1.0);
    CurveSampling flat;
    flat.n_uniform = 3;
    auto const disc = build_mesh(integrate_profile(p, 0.4, 1e-10, flat), 8);
    CHECK(disc.vertices.size() == 1 + 2 * 8);
    for (auto const& v : disc.vertices)
    {
        CHECK(v.z() == 0.0);
    }
    CHECK(euler_characteristic(disc) == 1);

    auto const full = build_mesh(integrate_profile(p, 0.74, 1e-10), 64);
    CHECK(euler_characteristic(full) == 1);
    for (std::size_t i = 0; i < full.vertices.size(); ++i)
    {
        double const rho = full.params[i].x();
        double const theta = full.params[i].y();
        double const r = p.eval(rho, 0);
        CHECK(full.vertices[i].x() == r * std::cos(theta));
        CHECK(full.vertices[i].y() == r * std::sin(theta));
    }

    CurveSampling two;
    two.n_uniform = 3;
    auto small = integrate_profile(p, 0.4, 1e-10, two);
    small.samples.pop_back();
    CHECK_THROWS_AS(build_mesh(small, 8), ConfigurationError);
    CHECK_THROWS_AS(build_mesh(integrate_profile(p, 0.4, 1e-10, two), 4), ConfigurationError);
}

TEST_CASE("discrete gauss curvature converges")
{
    auto const p = make_pogorelov_profile(1.0);
    CurveSampling uniform;
    uniform.n_uniform = 256;
    auto const mesh = build_mesh(integrate_profile(p, 0.74, 1e-10, uniform), 256);
    auto const kd = discrete_gauss_curvature(mesh);

    // K crosses zero inside the band, so errors are measured against its
    // largest magnitude there.
    double kmax = 0;
    for (int i = 0; i <= 1000; ++i)
    {
        kmax = std::max(kmax, std::abs(gauss_curvature(p, 0.55 + 0.1 * i / 1000.0)));
    }
    int checked = 0;
    double worst = 0;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    {
        double const rho = mesh.params[i].x();
        if (rho > 0.55 && rho < 0.65)
        {
            worst = std::max(worst, std::abs(kd[i] - gauss_curvature(p, rho)) / kmax);
            ++checked;
        }
    }
    CHECK(checked > 0);
    CHECK(worst < 0.1);

    // flat part has no angle defect
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    {
        if (mesh.params[i].x() < 0.49)
        {
            CHECK(std::abs(kd[i]) < 1e-8);
        }
    }
}

TEST_CASE("induced metric")
{
    auto const p = make_pogorelov_profile(1.0);
    auto const c = integrate_profile(p, 0.74, 1e-10);

    auto const flat = induced_metric_residual(p, c, {0.0, 0.5, 200, 64});
    // only cos^2 + sin^2 rounding remains
    double const ulp = std::numeric_limits<double>::epsilon();
    CHECK(flat.max_e <= 2 * ulp);
    CHECK(flat.max_f <= 2 * ulp);
    CHECK(flat.max_g <= 2 * ulp);

    auto const window = induced_metric_residual(p, c, {0.5, 0.74, 200, 64});
    CHECK(window.max() <= 1e-9);

    // negative control: a slope inflated by 1%
    auto bad = [&](double rho) { return 1.01 * meridian_slope(p, rho); };
    auto const r = induced_metric_residual(p, bad, {0.5, 0.74, 200, 64});
    double expected = 0;
    for (int i = 0; i < 200; ++i)
    {
        double const rho = 0.5 + 0.24 * i / 199.0;
        double const zp = meridian_slope(p, rho);
        expected = std::max(expected, 0.0201 * zp * zp);
    }
    CHECK(expected > 1e-5);
    CHECK(r.max_e == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("mean curvature")
{
    auto const p = make_pogorelov_profile(1.0);
    auto const mesh = build_mesh(integrate_profile(p, 0.74, 1e-10), 32);
    auto const rep = mean_curvature_scan(mesh);
    for (auto const& row : rep.rows)
    {
        if (row.rho < 0.5)
        {
            CHECK(row.mean == 0.0);
        }
    }
    // The explicit C^{1,1} embedding does not keep one sign of H: k_m -> -inf
    // as rho -> 3a/4 while k_c stays bounded.
    CHECK(rep.sign == SignClass::mixed);
    REQUIRE(rep.sign_change);
    CHECK(*rep.sign_change == doctest::Approx(kMeanSignChange).epsilon(1e-9));
    CHECK(std::string(to_string(rep.sign)) == "mixed");

    auto const sphere = make_sphere_profile(3.0);
    auto const sm = build_mesh(integrate_profile(sphere, 1.4, 1e-12), 16);
    auto const srep = mean_curvature_scan(sm);
    for (auto const& row : srep.rows)
    {
        CHECK(row.mean == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(srep.sign == SignClass::positive);
}

TEST_CASE("export formats")
{
    auto const c = integrate_profile(make_pogorelov_profile(1.0), 0.74, 1e-10);
    std::ostringstream csv;
    write_curve_csv(c, csv);
    CHECK(csv.str().rfind("rho,r,z,dz,d2z_left,d2z_right\n", 0) == 0);

    auto const mesh = build_mesh(c, 8);
    std::ostringstream obj;
    write_obj(mesh, obj);
    std::string const s = obj.str();
    CHECK(s.rfind("# pogorelov a=1 rho_max=0.73999999999999999\n", 0) == 0);
    std::size_t nv = 0, nf = 0;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
    {
        nv += line.rfind("v ", 0) == 0;
        nf += line.rfind("f ", 0) == 0;
    }
    CHECK(nv == mesh.vertices.size());
    CHECK(nf == mesh.faces.size());
}
