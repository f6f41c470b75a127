#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "pogorelov/embedding.hpp"
#include "pogorelov/errors.hpp"
#include "pogorelov/lemma_lab.hpp"

using namespace pogorelov;
using std::numbers::pi;

TEST_CASE("convex bound on a paraboloid sheet")
{
    TrigWeight w;
    w.w0 = 1.7;
    auto const cc = make_convex_case(w, 0.1, 0.03);
    CHECK(cc.m == 1.7);
    CHECK(cc.M == 1.7);
    CHECK_FALSE(violated_hypothesis(cc));
    auto const chk = convex_bound_check(cc);
    CHECK(chk.lhs == 0.0);
    CHECK(chk.rhs == 0.0);
    CHECK(chk.pass);
}

TEST_CASE("convex bound with a closed-form case")
{
    // w = 1 - 0.1 cos(5x): z = y^2 w / 2 is convex on |x| <= 0.1
    TrigWeight w;
    w.w0 = 1.0;
    w.terms.push_back({-0.1, 5.0, 0.0, 0.0, 0.0});
    double const c = 0.1, b = 0.03;
    auto const cc = make_convex_case(w, c, b);
    CHECK(cc.m == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(cc.M == doctest::Approx(1.0 - 0.1 * std::cos(0.5)).epsilon(1e-14));
    auto const chk = convex_bound_check(cc);
    CHECK(chk.lhs == doctest::Approx(0.5 * 2.5 * std::cos(0.5) * b * b).epsilon(1e-12));
    CHECK(chk.rhs == doctest::Approx(0.1 * (1 - std::cos(0.5)) * b * b / (c * c)).epsilon(1e-12));
    CHECK(std::abs(chk.x_at) == doctest::Approx(c));
    CHECK(chk.pass);
}

TEST_CASE("non-convex candidate is rejected")
{
    // z = y^2 (2 + sin x) / 2 has z_xx = -y^2 sin(x) / 2 < 0 for x > 0
    TrigWeight w;
    w.w0 = 2.0;
    w.terms.push_back({1.0, 1.0, -pi / 2, 0.0, 0.0});
    auto const cc = make_convex_case(w, 1.0, 0.1);
    auto const why = violated_hypothesis(cc);
    REQUIRE(why);
    CHECK(why->find("convexity") != std::string::npos);
    CHECK_THROWS_AS(convex_bound_check(cc), RejectedInputError);
    CHECK_THROWS_AS(make_convex_case(w, 0.0, 0.1), DomainError);
}

TEST_CASE("generated convex cases")
{
    auto const a = generate_convex_cases(1, 1, 0.1, 0.03);
    auto const b = generate_convex_cases(1, 1, 0.1, 0.03);
    REQUIRE(a.size() == 1);
    CHECK(a[0].weight.w0 == b[0].weight.w0);
    REQUIRE(a[0].weight.terms.size() == b[0].weight.terms.size());
    for (std::size_t i = 0; i < a[0].weight.terms.size(); ++i)
    {
        CHECK(a[0].weight.terms[i].amplitude == b[0].weight.terms[i].amplitude);
        CHECK(a[0].weight.terms[i].kx == b[0].weight.terms[i].kx);
    }
    CHECK(a[0].z == b[0].z);

    GeneratorStats stats;
    auto const wide = generate_convex_cases(7, 100, 1.0, 0.3, &stats);
    CHECK(wide.size() == 100);
    CHECK(stats.accepted >= 1);

    int passed = 0;
    auto const cases = generate_convex_cases(5, 100, 0.1, proof_box_height(1.0, 0.1));
    for (auto const& cc : cases)
    {
        passed += convex_bound_check(cc).pass;
    }
    CHECK(passed == 100);

    auto const j = archive_case(cases[0]);
    CHECK(j.contains("terms"));
    CHECK(j["z"].size() == 64);
    CHECK(proof_box_height(1.0, 0.1) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK_THROWS_AS(generate_convex_cases(1, 0, 0.1, 0.03), ConfigurationError);
}

TEST_CASE("ruling law on analytic developables")
{
    SUBCASE("cylinder")
    {
        auto const s = sample_ruling(make_cylinder(0.7), 0.3, -1.0, 1.0, 1000);
        for (double k : s.k)
        {
            CHECK(std::abs(k) == doctest::Approx(1 / 0.7).epsilon(1e-14));
        }
        auto const fit = ruling_curvature_fit(s);
        CHECK(std::abs(fit.slope) < 1e-12);
        CHECK(fit.max_residual < 1e-12);
    }
    SUBCASE("cone")
    {
        double const alpha = pi / 6;
        auto const s = sample_ruling(make_cone(alpha), 0.3, 0.5, 2.0, 1000);
        for (std::size_t i = 0; i < s.k.size(); ++i)
        {
            double const v = 0.5 + s.s[i];
            CHECK(std::abs(s.k[i]) == doctest::Approx(1 / (std::tan(alpha) * v)).epsilon(1e-12));
        }
        auto const fit = ruling_curvature_fit(s);
        CHECK(std::abs(fit.slope) == doctest::Approx(std::tan(alpha)).epsilon(1e-12));
        CHECK(std::abs(fit.intercept) == doctest::Approx(0.5 * std::tan(alpha)).epsilon(1e-12));
        CHECK(fit.max_residual < 1e-6);
    }
    SUBCASE("helix tangent developable")
    {
        double const R = 1.0, pitch = 0.5;
        double const h = pitch;
        auto const s = sample_ruling(make_helix_tangent_developable(R, pitch), 0.3, 0.2, 3.0, 1000);
        for (std::size_t i = 0; i < s.k.size(); ++i)
        {
            double const v = 0.2 + s.s[i];
            CHECK(std::abs(s.k[i]) == doctest::Approx(h / (R * v)).epsilon(1e-10));
        }
        CHECK(s.max_abs_gauss < 1e-20);
        CHECK(ruling_curvature_fit(s).max_residual < 1e-6);
    }
    SUBCASE("generator through the apex")
    {
        auto const s = sample_ruling(make_cone(pi / 6), 0.3, -1.0, 1.0, 100);
        CHECK_THROWS_AS(ruling_curvature_fit(s), RejectedInputError);
    }
}

TEST_CASE("ruling fit converges under sample refinement")
{
    // derivatives from differences at the sample spacing
    auto residual = [](RuledSurface const& surf, int count) {
        double const step = (2.0 - 0.5) / (count - 1);
        return ruling_curvature_fit(sample_ruling(surf, 0.3, 0.5, 2.0, count, step)).max_residual;
    };
    auto const helix = make_helix_tangent_developable(1.0, 0.5);
    double const r1 = residual(helix, 50);
    double const r2 = residual(helix, 100);
    CHECK(r1 > 0.0);
    CHECK(std::log2(r1 / r2) >= 1.9);

    // along a cone generator every difference quotient scales with v, so the
    // law holds exactly at any spacing
    CHECK(residual(make_cone(pi / 5), 50) < 1e-9);
}

TEST_CASE("sagitta")
{
    CHECK(sagitta(1.0, 0.0).value == 0.0);
    auto const s = sagitta(1.0, 0.1);
    // 0.5 - sqrt(0.24) = 0.01010205144336438036...
    double const ref = 0.01010205144336438036;
    CHECK(std::abs(s.value - ref) <= 2 * (std::nextafter(ref, 1.0) - ref));
    CHECK(s.below_upper);
    CHECK(s.above_lower);
    CHECK(s.value <= 0.02);
    CHECK_THROWS_AS(sagitta(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(sagitta(1.0, -0.1), DomainError);

    // ratio to c^2/a is 1/(1/2 + sqrt(1/4 - x^2)) = 1 + x^2 + 2x^4 + ...
    for (double x : {1e-1, 1e-2, 1e-3})
    {
        double const ratio = sagitta(1.0, x).value / (x * x);
        CHECK(std::abs(ratio - 1.0) <= x * x * (1 + 3 * x * x));
        CHECK(std::abs(ratio - 1.0 - x * x) <= 3 * std::pow(x, 4) + 1e-15);
    }
    for (int i = 1; i <= 100; ++i)
    {
        double const c = 0.3 * i / 100;
        CHECK(sagitta(1.0, c).value <= 2 * c * c);
        CHECK(sagitta(2.5, 2.5 * c).below_upper);
    }
}

TEST_CASE("affine segments")
{
    AffineScanOptions opts;
    opts.n_boundary = 32;

    SUBCASE("flat part of the embedding")
    {
        auto const curve = integrate_profile(make_pogorelov_profile(1.0), 0.74, 1e-10);
        auto const chords = affine_segment_detect(revolution_disc_map(curve, 0.4), 1e-9, opts);
        CHECK(chords.size() == 32 * 31 / 2);
        CHECK_THROWS_AS(revolution_disc_map(curve, 0.8), DomainError);
    }
    SUBCASE("sphere cap")
    {
        DiscMap m;
        m.radius = 0.5;
        m.phi = [](double x, double y) { return Eigen::Vector3d(x, y, std::sqrt(1 - x * x - y * y)); };
        CHECK(affine_segment_detect(m, 1e-6, opts).empty());
    }
    SUBCASE("cylinder patch")
    {
        DiscMap m;
        m.radius = 0.5;
        m.phi = [](double x, double y) { return Eigen::Vector3d(std::cos(x), std::sin(x), y); };
        auto const chords = affine_segment_detect(m, 1e-6, opts);
        CHECK(chords.size() == 15);
        for (auto const& ch : chords)
        {
            CHECK(ch.i + ch.j == 32);
        }

        // rigid motion of the image leaves the chord set unchanged
        Eigen::Matrix3d const R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
        DiscMap moved = m;
        moved.phi = [&](double x, double y) { return Eigen::Vector3d(R * m.phi(x, y) + Eigen::Vector3d(4, -1, 2)); };
        auto const again = affine_segment_detect(moved, 1e-6, opts);
        REQUIRE(again.size() == chords.size());
        for (std::size_t k = 0; k < chords.size(); ++k)
        {
            CHECK(again[k].i == chords[k].i);
            CHECK(again[k].j == chords[k].j);
            CHECK(std::abs(again[k].deviation - chords[k].deviation) < 1e-12);
        }
    }
}
