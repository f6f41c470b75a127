#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "pogorelov/assembly.hpp"
#include "pogorelov/errors.hpp"

using namespace pogorelov;

namespace
{
double max_abs(Eigen::Matrix2d const& m)
{
    return m.cwiseAbs().maxCoeff();
}

Eigen::Matrix2d rotation(double t)
{
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}
}  // namespace

TEST_CASE("layout geometry")
{
    auto const one = build_layout(1);
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].cx == 1.0);
    CHECK(one.entries[0].cy == 0.0);
    CHECK(one.entries[0].radius == 0.125);

    auto const two = check_layout(build_layout(2));
    CHECK(two.overlaps == 0);
    CHECK(two.min_gap == doctest::Approx(0.5 - (1.0 / 8 + 1.0 / 18)).epsilon(1e-15));

    auto const fifty = build_layout(50);
    for (std::size_t i = 0; i < fifty.entries.size(); ++i)
    {
        auto const& di = fifty.entries[i];
        CHECK(std::hypot(di.cx, di.cy) > di.radius);
        for (std::size_t j = i + 1; j < fifty.entries.size(); ++j)
        {
            auto const& dj = fifty.entries[j];
            CHECK(std::hypot(di.cx - dj.cx, di.cy - dj.cy) > di.radius + dj.radius);
        }
    }
    CHECK(check_layout(fifty).overlaps == 0);
    CHECK(check_layout(fifty).contains_origin == 0);
    CHECK_THROWS_AS(build_layout(0), DomainError);
}

TEST_CASE("metric values")
{
    MetricField const field(build_layout(10));
    auto const I = Eigen::Matrix2d::Identity();
    CHECK(eval_metric(field, 0.0, 0.0) == I);
    CHECK(eval_metric(field, 0.75, 0.1) == I);
    CHECK(eval_metric(field, -0.05, 0.0) == I);
    CHECK(!field.locate(0.75, 0.1));

    double const a = 0.125;
    CHECK(eval_metric(field, 1.0 + 0.25 * a, 0.0) == I);
    CHECK(eval_metric(field, 1.0, 0.25 * a) == I);

    auto const p = make_pogorelov_profile(a);
    double const rho = 0.75 * a;
    double const f = p.eval(rho, 0);
    auto const h = eval_metric(field, 1.0 + rho, 0.0);
    CHECK(h(0, 0) == 1.0);
    CHECK(h(0, 1) == 0.0);
    CHECK(h(1, 1) == doctest::Approx(f * f / (rho * rho)).epsilon(1e-15));
    CHECK(max_abs(h - polar_pullback(p, rho, 0.0)) < 1e-15);
    REQUIRE(field.locate(1.0 + rho, 0.0));
    CHECK(*field.locate(1.0 + rho, 0.0) == 0);
}

TEST_CASE("metric matches the polar pullback")
{
    MetricField const field(build_layout(8));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < field.layout().entries.size(); ++i)
    {
        auto const& d = field.layout().entries[i];
        auto const p = make_pogorelov_profile(d.radius);
        double worst = 0;
        for (int k = 0; k < 1000; ++k)
        {
            double const rho = d.radius * (1e-3 + 0.998 * unit(rng));
            double const theta = 2 * M_PI * unit(rng);
            auto const h = eval_metric(field, d.cx + rho * std::cos(theta), d.cy + rho * std::sin(theta));
            worst = std::max(worst, max_abs(h - polar_pullback(p, rho, theta)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("metric positive definite and rotation covariant")
{
    MetricField const field(build_layout(30));
    auto const dom = field.domain();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(dom.x_lo, dom.x_hi), uy(dom.y_lo, dom.y_hi), unit(0.0, 1.0);
    double lo = INFINITY;
    for (int k = 0; k < 10000; ++k)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(eval_metric(field, ux(rng), uy(rng)));
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    CHECK(lo > 0.0);

    for (int n : {1, 3, 12})
    {
        auto const& d = field.layout().entries[n - 1];
        for (int k = 0; k < 200; ++k)
        {
            double const rho = d.radius * (0.5 + 0.5 * unit(rng));
            double const t0 = 2 * M_PI * unit(rng);
            double const t1 = 2 * M_PI * unit(rng);
            auto const h0 = field.disc_jet(n - 1, d.cx + rho * std::cos(t0), d.cy + rho * std::sin(t0)).value;
            auto const h1 = field.disc_jet(n - 1, d.cx + rho * std::cos(t1), d.cy + rho * std::sin(t1)).value;
            auto const R = rotation(t1 - t0);
            CHECK(max_abs(h1 - R * h0 * R.transpose()) < 1e-12);
        }
    }
}

TEST_CASE("metric derivatives")
{
    MetricField const field(build_layout(10));
    for (auto const& m : metric_derivatives(field, 0.75, 0.1, 1))
    {
        CHECK(m.isZero(0.0));
    }
    for (auto const& m : metric_derivatives(field, 1.0 + 0.3 * 0.125, 0.0, 2))
    {
        CHECK(m.isZero(0.0));
    }
    CHECK_THROWS_AS(metric_derivatives(field, 1.0, 0.0, 3), DomainError);

    // central differences of h - delta at local rho = 0.7 a in disc 2
    auto const& d = field.layout().entries[1];
    double const step = 1e-7;
    auto dev = [&](double x, double y) { return field.jet(x, y).deviation; };
    for (double theta : {0.3, 1.1, 2.5, 4.0})
    {
        double const x = d.cx + 0.7 * d.radius * std::cos(theta);
        double const y = d.cy + 0.7 * d.radius * std::sin(theta);
        auto const j = field.jet(x, y);
        Eigen::Matrix2d const fx = (dev(x + step, y) - dev(x - step, y)) / (2 * step);
        Eigen::Matrix2d const fy = (dev(x, y + step) - dev(x, y - step)) / (2 * step);
        CHECK(max_abs(fx - j.d1[0]) <= 1e-5 * max_abs(j.d1[0]));
        CHECK(max_abs(fy - j.d1[1]) <= 1e-5 * max_abs(j.d1[1]));

        Eigen::Matrix2d const fxx = (dev(x + step, y) - 2 * dev(x, y) + dev(x - step, y)) / (step * step);
        Eigen::Matrix2d const fyy = (dev(x, y + step) - 2 * dev(x, y) + dev(x, y - step)) / (step * step);
        Eigen::Matrix2d const fxy = (field.jet(x + step, y).d1[1] - field.jet(x - step, y).d1[1]) / (2 * step);
        double const scale = std::max({max_abs(j.d2[0]), max_abs(j.d2[1]), max_abs(j.d2[2])});
        // second differences of a 1e-11 quantity at step 1e-7 carry ~1e-4 relative roundoff
        CHECK(max_abs(fxx - j.d2[0]) <= 1e-3 * scale);
        CHECK(max_abs(fyy - j.d2[2]) <= 1e-3 * scale);
        CHECK(max_abs(fxy - j.d2[1]) <= 1e-5 * scale);
    }
}

TEST_CASE("layout and grid exports")
{
    auto const layout = build_layout(3);
    std::ostringstream js;
    write_layout_json(layout, js);
    auto const parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[1]["n"] == 2);
    CHECK(parsed[1]["cx"].get<double>() == 0.5);
    CHECK(parsed[1]["r"].get<double>() == 1.0 / 18);

    std::ostringstream csv;
    write_metric_grid_csv(MetricField(layout), 4, 3, csv);
    std::string const s = csv.str();
    CHECK(s.rfind("x,y,h11,h12,h22\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 4 * 3);
}
