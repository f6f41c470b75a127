#include "pogorelov/curvature.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/numerics.hpp"

namespace pogorelov
{

double gauss_curvature(RadialProfile const& p, double rho)
{
    if (!p.in_domain(rho))
    {
        throw DomainError(fmt::format("rho = {} outside [0, {})", rho, p.a()));
    }
    if (rho == 0.0)
    {
        return -p.eval(0.0, 3) / p.eval(0.0, 1);
    }
    return -p.eval(rho, 2) / p.eval(rho, 0);
}

double closed_form_K(double a, double r)
{
    if (!(a > 0.0))
    {
        throw DomainError(fmt::format("a = {} must be positive", a));
    }
    if (r < 0.5 * a || r > a)
    {
        throw DomainError(fmt::format("closed form is defined for a/2 <= r <= a, got r = {}", r));
    }
    double const s = a - 2 * r;
    double const t = a - r;
    double const den = a * s * s * s * t * t * t + 8 * r;
    if (std::abs(den) < 1e-14)
    {
        throw SingularEvaluationError(fmt::format("denominator vanishes at a = {}, r = {}", a, r));
    }
    return -6 * a * s * t * (11 * a * a - 30 * a * r + 20 * r * r) / den;
}

double curvature_fd_step(double a)
{
    return std::max(1e-5 * a, std::cbrt(std::numeric_limits<double>::epsilon()) * a);
}

double finite_difference_K(RadialProfile const& p, double rho)
{
    if (!p.in_domain(rho))
    {
        throw DomainError(fmt::format("rho = {} outside [0, {})", rho, p.a()));
    }
    if (rho == 0.0)
    {
        // Both sqrt(G) and sqrt(G)'' vanish; the ratio's limit is exact.
        return gauss_curvature(p, 0.0);
    }
    double const h = curvature_fd_step(p.a());
    // sqrt(G) - rho has the same second derivative as sqrt(G) without the
    // cancellation that a 1e-5 step would otherwise amplify.
    auto dev = [&p](double x) { return p.deviation(x, 0); };

    // Pick a stencil side that keeps every node within one smooth branch.
    bool left_ok = rho - h >= 0.0;
    bool right_ok = rho + h < p.a();
    if (auto bp = p.branch_point())
    {
        if (rho >= *bp && rho - h < *bp)
        {
            left_ok = false;
        }
        if (rho < *bp && rho + h >= *bp)
        {
            right_ok = false;
        }
    }
    double d2;
    if (left_ok && right_ok)
    {
        d2 = (dev(rho + h) - 2 * dev(rho) + dev(rho - h)) / (h * h);
    }
    else
    {
        double const sign = right_ok ? 1.0 : -1.0;
        if (rho + sign * 3 * h < 0.0 || rho + sign * 3 * h >= p.a())
        {
            throw DomainError(fmt::format("no finite-difference stencil fits at rho = {}", rho));
        }
        d2 = numerics::one_sided_derivative(dev, rho, h, 2, 4, sign);
    }
    return -d2 / p.eval(rho, 0);
}

std::vector<CurvatureSample> curvature_samples(RadialProfile const& p, std::vector<double> const& rhos)
{
    std::vector<CurvatureSample> out;
    out.reserve(rhos.size());
    double const nan = std::numeric_limits<double>::quiet_NaN();
    for (double rho : rhos)
    {
        CurvatureSample s;
        s.rho = rho;
        s.k_formula = gauss_curvature(p, rho);
        s.k_fd = finite_difference_K(p, rho);
        bool const has_closed = p.kind() == RadialProfile::Kind::pogorelov && rho >= 0.5 * p.a();
        s.k_closed = has_closed ? closed_form_K(p.a(), rho) : nan;
        s.abs_err = has_closed ? std::abs(s.k_formula - s.k_closed) : nan;
        out.push_back(s);
    }
    return out;
}

std::vector<double> expansion_series(double a, int order)
{
    if (!(a > 0.0) || order < 1)
    {
        throw ConfigurationError("expansion_series needs a > 0 and order >= 1");
    }
    // f(a/2 + u) = a/2 + u + a u^3 (u - a/2)^3, as coefficients in u
    std::vector<double> f(7 + order, 0.0);
    f[0] = 0.5 * a;
    f[1] = 1.0;
    double const h = -0.5 * a;
    double const binom[4] = {1, 3, 3, 1};
    for (int j = 0; j <= 3; ++j)
    {
        f[3 + j] += a * binom[j] * std::pow(h, 3 - j);
    }
    std::vector<double> f2(f.size(), 0.0);
    for (std::size_t k = 2; k < f.size(); ++k)
    {
        f2[k - 2] = static_cast<double>(k * (k - 1)) * f[k];
    }
    // q = -f2 / f by long division of power series
    std::vector<double> q(order + 1, 0.0);
    for (int k = 0; k <= order; ++k)
    {
        double acc = -f2[k];
        for (int j = 0; j < k; ++j)
        {
            acc -= q[j] * f[k - j];
        }
        q[k] = acc / f[0];
    }
    return {q.begin() + 1, q.end()};
}

ExpansionFit expansion_fit(RadialProfile const& p, double eps_fit, int n_grid)
{
    auto const bp = p.branch_point();
    if (!bp)
    {
        throw ConfigurationError("expansion_fit needs a profile with a branch point");
    }
    if (!(eps_fit > 0.0) || eps_fit > 0.25 * (p.a() - *bp))
    {
        throw DomainError(fmt::format("eps_fit = {} must lie in (0, (a - a/2)/4]", eps_fit));
    }
    std::vector<double> us;
    std::vector<double> ks;
    double last_rho = *bp;
    for (int i = 1; i <= n_grid; ++i)
    {
        double const rho = *bp + eps_fit * i / n_grid;
        if (!(rho > last_rho))
        {
            continue;
        }
        last_rho = rho;
        double const k = gauss_curvature(p, rho);
        if (!std::isfinite(k))
        {
            continue;
        }
        us.push_back(rho - *bp);
        ks.push_back(k);
    }
    if (us.size() < 8)
    {
        throw ConfigurationError(fmt::format("only {} usable grid points for the expansion fit", us.size()));
    }

    // Fit in t = u / eps so both columns are O(1).
    Eigen::MatrixXd design(us.size(), 2);
    Eigen::VectorXd rhs(us.size());
    for (std::size_t i = 0; i < us.size(); ++i)
    {
        double const t = us[i] / eps_fit;
        design(i, 0) = t;
        design(i, 1) = t * t;
        rhs(i) = ks[i];
    }
    Eigen::Vector2d const coef = design.colPivHouseholderQr().solve(rhs);
    ExpansionFit fit;
    fit.c1 = coef(0) / eps_fit;
    fit.c2 = coef(1) / (eps_fit * eps_fit);
    fit.n_points = static_cast<int>(us.size());
    return fit;
}

double lower_bound_window(RadialProfile const& p, double coeff)
{
    if (!(coeff > 0.0))
    {
        throw DomainError("coeff must be positive");
    }
    auto const bp = p.branch_point();
    if (!bp)
    {
        throw ConfigurationError("lower_bound_window needs a profile with a branch point");
    }
    double const resolution = 1e-6 * p.a();
    double const coarse = 1e-3 * p.a();
    double const u_end = p.a() - *bp;
    auto holds = [&](double u) {
        double const rho = *bp + u;
        if (!(rho < p.a()))
        {
            return false;
        }
        return gauss_curvature(p, rho) > coeff * u;
    };
    if (!holds(resolution))
    {
        return 0.0;
    }
    double good = resolution;
    for (double u = coarse; u < u_end; u += coarse)
    {
        if (!holds(u))
        {
            return numerics::bisect_predicate(holds, good, u, resolution).good;
        }
        good = u;
    }
    return numerics::bisect_predicate(holds, good, u_end, resolution).good;
}

}  // namespace pogorelov
