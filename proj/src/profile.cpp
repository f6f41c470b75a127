#include "pogorelov/profile.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/numerics.hpp"

namespace pogorelov
{

RadialProfile::RadialProfile(Kind kind, double a) : kind_(kind), a_(a)
{
    if (!(a > 0.0) || !std::isfinite(a))
    {
        throw DomainError(fmt::format("profile parameter a must be positive, got {}", a));
    }
    if (kind == Kind::sphere && a > std::numbers::pi)
    {
        throw DomainError("sphere profile sin(rho) is positive only on (0, pi)");
    }
}

std::string RadialProfile::name() const
{
    switch (kind_)
    {
        case Kind::pogorelov:
            return "pogorelov";
        case Kind::flat:
            return "flat";
        case Kind::sphere:
            return "sphere";
        case Kind::hyperbolic:
            return "hyperbolic";
    }
    return "unknown";
}

void RadialProfile::check(double rho, int k) const
{
    if (k < 0 || k > 3)
    {
        throw DomainError(fmt::format("derivative order {} not in 0..3", k));
    }
    if (!in_domain(rho))
    {
        throw DomainError(fmt::format("rho = {} outside [0, {})", rho, a_));
    }
}

std::optional<double> RadialProfile::branch_point() const
{
    if (kind_ == Kind::pogorelov)
    {
        return 0.5 * a_;
    }
    return std::nullopt;
}

// Derivatives of a (rho-a)^3 (rho-a/2)^3 written in u = rho - a/2, v = rho - a.
double RadialProfile::pogorelov_deviation(double rho, int k, Side side) const
{
    double const half = 0.5 * a_;
    if (rho < half || (rho == half && side == Side::left))
    {
        return 0.0;
    }
    double const u = rho - half;
    double const v = rho - a_;
    switch (k)
    {
        case 0:
            return a_ * u * u * u * v * v * v;
        case 1:
            return 3.0 * a_ * u * u * v * v * (u + v);
        case 2:
            return 6.0 * a_ * u * v * (u * u + 3.0 * u * v + v * v);
        default:
            return 6.0 * a_ * (v * v * v + 9.0 * u * v * v + 9.0 * u * u * v + u * u * u);
    }
}

double RadialProfile::deviation_one_sided(double rho, int k, Side side) const
{
    check(rho, k);
    switch (kind_)
    {
        case Kind::pogorelov:
            return pogorelov_deviation(rho, k, side);
        case Kind::flat:
            return 0.0;
        case Kind::sphere:
            switch (k)
            {
                case 0:
                    return std::sin(rho) - rho;
                case 1: {
                    double const s = std::sin(0.5 * rho);
                    return -2.0 * s * s;
                }
                case 2:
                    return -std::sin(rho);
                default:
                    return -std::cos(rho);
            }
        case Kind::hyperbolic:
            switch (k)
            {
                case 0:
                    return std::sinh(rho) - rho;
                case 1: {
                    double const s = std::sinh(0.5 * rho);
                    return 2.0 * s * s;
                }
                case 2:
                    return std::sinh(rho);
                default:
                    return std::cosh(rho);
            }
    }
    return 0.0;
}

double RadialProfile::deviation(double rho, int k) const
{
    return deviation_one_sided(rho, k, Side::right);
}

double RadialProfile::eval_one_sided(double rho, int k, Side side) const
{
    check(rho, k);
    switch (kind_)
    {
        case Kind::sphere:
            switch (k)
            {
                case 0:
                    return std::sin(rho);
                case 1:
                    return std::cos(rho);
                case 2:
                    return -std::sin(rho);
                default:
                    return -std::cos(rho);
            }
        case Kind::hyperbolic:
            switch (k)
            {
                case 0:
                    return std::sinh(rho);
                case 1:
                    return std::cosh(rho);
                case 2:
                    return std::sinh(rho);
                default:
                    return std::cosh(rho);
            }
        default:
            break;
    }
    double const linear = k == 0 ? rho : (k == 1 ? 1.0 : 0.0);
    return linear + deviation_one_sided(rho, k, side);
}

double RadialProfile::eval(double rho, int k) const
{
    return eval_one_sided(rho, k, Side::right);
}

RadialProfile make_pogorelov_profile(double a)
{
    return RadialProfile(RadialProfile::Kind::pogorelov, a);
}

RadialProfile make_flat_profile(double a)
{
    return RadialProfile(RadialProfile::Kind::flat, a);
}

RadialProfile make_sphere_profile(double a)
{
    return RadialProfile(RadialProfile::Kind::sphere, a);
}

RadialProfile make_hyperbolic_profile(double a)
{
    return RadialProfile(RadialProfile::Kind::hyperbolic, a);
}

//---------------------------------------------------------------------------//

namespace
{
constexpr int kStencilAccuracy = 4;
constexpr int kRichardsonLevels = 4;

double extrapolated_one_sided(RadialProfile const& p, double rho0, double h_min, int order, double sign)
{
    // Difference f - rho; the identity part would only contribute roundoff.
    auto f = [&p](double x) { return p.deviation(x, 0); };
    int const n_nodes = order + kStencilAccuracy;
    std::vector<double> est;
    for (int level = 0; level < kRichardsonLevels; ++level)
    {
        double const h = h_min * std::ldexp(1.0, kRichardsonLevels - 1 - level);
        est.push_back(numerics::one_sided_derivative(f, rho0, h, order, n_nodes, sign));
    }
    return numerics::richardson_diagonal(est, kStencilAccuracy).back() + (order == 1 ? 1.0 : 0.0);
}
}  // namespace

SmoothnessReport smoothness_report(RadialProfile const& p, double rho0, double h_min)
{
    if (!(rho0 > 0.0 && rho0 < p.a()))
    {
        throw DomainError(fmt::format("rho0 = {} is not interior to [0, {})", rho0, p.a()));
    }
    if (!(h_min > 0.0))
    {
        throw DomainError("h_min must be positive");
    }
    double const reach = (3 + kStencilAccuracy - 1) * h_min * std::ldexp(1.0, kRichardsonLevels - 1);
    if (rho0 - reach < 0.0 || rho0 + reach >= p.a())
    {
        throw DomainError(fmt::format(
            "stencil reach {} around rho0 = {} leaves [0, {}); decrease h_min", reach, rho0, p.a()));
    }

    SmoothnessReport report;
    report.rho0 = rho0;
    report.h_min = h_min;
    for (int k = 0; k <= 3; ++k)
    {
        OrderLimits& row = report.orders[k];
        row.order = k;
        row.exact_left = p.eval_one_sided(rho0, k, Side::left);
        row.exact_right = p.eval_one_sided(rho0, k, Side::right);
        row.jump = std::abs(row.exact_right - row.exact_left);
        if (k == 0)
        {
            // f itself is continuous for every built-in profile; the stencil
            // would sample f(rho0) alone.
            row.fd_left = p.eval_one_sided(rho0, 0, Side::left);
            row.fd_right = p.eval_one_sided(rho0, 0, Side::right);
        }
        else
        {
            row.fd_left = extrapolated_one_sided(p, rho0, h_min, k, -1.0);
            row.fd_right = extrapolated_one_sided(p, rho0, h_min, k, +1.0);
        }
        row.fd_jump = std::abs(row.fd_right - row.fd_left);
    }
    return report;
}

std::vector<Interval> embeddable_window(RadialProfile const& p, int grid_n)
{
    if (grid_n < 100)
    {
        throw DomainError(fmt::format("grid_n = {} below the minimum of 100", grid_n));
    }
    double const a = p.a();
    double const width = 1e-12 * a;
    auto below = [&p](double x) { return p.deviation(x, 1) < 0.0; };
    auto not_below = [&p](double x) { return !(p.deviation(x, 1) < 0.0); };

    std::vector<Interval> out;
    double open_lo = 0.0;
    double prev_x = 0.0;
    bool prev_in = below(0.0);
    for (int i = 1; i < grid_n; ++i)
    {
        double const x = a * static_cast<double>(i) / grid_n;
        bool const in = below(x);
        if (in && !prev_in)
        {
            auto const br = numerics::bisect_predicate(not_below, prev_x, x, width);
            open_lo = 0.5 * (br.good + br.bad);
        }
        else if (!in && prev_in)
        {
            auto const br = numerics::bisect_predicate(below, prev_x, x, width);
            out.push_back({open_lo, 0.5 * (br.good + br.bad)});
        }
        prev_in = in;
        prev_x = x;
    }
    if (prev_in)
    {
        out.push_back({open_lo, a});
    }
    return out;
}

}  // namespace pogorelov
