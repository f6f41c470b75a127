#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pogorelov/assembly.hpp"
#include "pogorelov/errors.hpp"
#include "pogorelov/regularity.hpp"

using namespace pogorelov;

namespace
{
NormReport synthetic(int n_last, double power, double scale = 1.0)
{
    NormReport r;
    r.grid_n = 64;
    for (int n = 1; n <= n_last; ++n)
    {
        NormRow row;
        row.n = n;
        row.a = disc_radius(n);
        for (auto& v : row.norms)
        {
            v = scale * std::pow(n + 1.0, power);
        }
        r.rows.push_back(row);
    }
    return r;
}
}  // namespace

TEST_CASE("decay fit on exact power laws")
{
    auto const fits = decay_fit(synthetic(40, -4.0, 3.0), 5, 40);
    for (int k = 0; k < kNumNorms; ++k)
    {
        CHECK(fits[k].slope == doctest::Approx(-4.0).epsilon(1e-6));
        CHECK(fits[k].claimed == kClaimedExponents[k]);
        CHECK(fits[k].n_points == 36);
    }
    CHECK(fits[kSupDev].name == "sup_dev");

    auto zero = synthetic(40, -4.0);
    for (auto& row : zero.rows)
    {
        row.norms[kLipD2] = 0;
    }
    CHECK(std::isinf(decay_fit(zero, 5, 40)[kLipD2].slope));
    CHECK(decay_fit(zero, 5, 40)[kLipD2].slope < 0);
    CHECK_THROWS(decay_fit(zero, 5, 7));
}

TEST_CASE("tail sums")
{
    auto const tails = cauchy_check(synthetic(2000, -4.0), 2000);
    for (int m : {10, 20, 50})
    {
        double const t = tails.tails[kSupD2][m - 1];
        CHECK(tails.m[m - 1] == m);
        // sum over n > m of (n+1)^-4 ~ (m + 3/2)^-3 / 3
        CHECK(t == doctest::Approx(std::pow(m + 1.5, -3.0) / 3.0).epsilon(0.01));
    }
    for (bool mono : tails.monotone)
    {
        CHECK(mono);
    }

    MetricField const single(build_layout(1));
    auto const one = cauchy_check(build_norm_report(single, 1, 1, 64), 1);
    for (auto const& t : one.tails)
    {
        REQUIRE(t.size() == 1);
        CHECK(t[0] == 0.0);
    }
}

TEST_CASE("norms of the disc metrics")
{
    MetricField const field(build_layout(12));
    auto const report = build_norm_report(field, 1, 12, 64);
    REQUIRE(report.rows.size() == 12);
    for (std::size_t i = 1; i < report.rows.size(); ++i)
    {
        for (int k = 0; k < kNumNorms; ++k)
        {
            CHECK(report.rows[i].norms[k] > 0.0);
            CHECK(report.rows[i].norms[k] < report.rows[i - 1].norms[k]);
        }
    }
    // sup_dev is max |f^2/rho^2 - 1|; values from 40-digit evaluation of the profile
    CHECK(report.rows[0].norms[kSupDev] == doctest::Approx(2.5070344333438225e-09).epsilon(1e-4));
    CHECK(report.rows[4].norms[kSupDev] == doctest::Approx(4.717427588227337e-15).epsilon(1e-4));
    for (auto const& row : report.rows)
    {
        CHECK_FALSE(row.flagged);
        // the Lipschitz quotient of D^2 peaks where f''' jumps
        bool const near_jump = std::abs(row.lip_argmax - 0.5) < 0.05 || std::abs(row.lip_argmax - 1.0) < 0.05;
        CHECK_MESSAGE(near_jump, "n=" << row.n << " argmax=" << row.lip_argmax);
    }
}

TEST_CASE("measured decay of the layout norms")
{
    MetricField const field(build_layout(40));
    auto const report = build_norm_report(field, 1, 40, 64);
    auto const fits = decay_fit(report, 5, 40);
    CHECK(fits[kSupD2].slope <= -3.0);
    CHECK(fits[kLipD2].slope <= -1.0);
    // f - rho = O(a^7) and a ~ (n+1)^-2 give these exponents exactly
    CHECK(fits[kSupDev].slope == doctest::Approx(-12.0).epsilon(1e-3));
    CHECK(fits[kSupD1].slope == doctest::Approx(-10.0).epsilon(1e-3));
    CHECK(fits[kSupD2].slope == doctest::Approx(-8.0).epsilon(1e-3));
    CHECK(fits[kLipD2].slope == doctest::Approx(-6.0).epsilon(1e-2));
    auto const tails = cauchy_check(report, 40);
    for (int k = 0; k < kNumNorms; ++k)
    {
        CHECK(tails.monotone[k]);
        CHECK(tails.below_threshold[k]);
    }
}

TEST_CASE("grid refinement changes sup norms by less than 5%")
{
    MetricField const field(build_layout(6));
    for (int n : {1, 3, 6})
    {
        auto const coarse = estimate_norms(field, n, 64);
        auto const fine = estimate_norms(field, n, 128);
        for (int k = kSupDev; k <= kSupD2; ++k)
        {
            CHECK(std::abs(fine.norms[k] - coarse.norms[k]) < 0.05 * fine.norms[k]);
        }
    }
}

TEST_CASE("norm csv")
{
    MetricField const field(build_layout(3));
    std::ostringstream os;
    write_norm_csv(build_norm_report(field, 1, 3, 64), os);
    CHECK(os.str().rfind("n,a,sup_dev,sup_D1,sup_D2,lip_D2\n", 0) == 0);
    CHECK_THROWS_AS(estimate_norms(field, 1, 16), ConfigurationError);
}
