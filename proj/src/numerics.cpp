#include "pogorelov/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace pogorelov::numerics
{

std::vector<double> fd_weights(double x0, std::span<double const> nodes, int order)
{
    int const n = static_cast<int>(nodes.size());
    if (order < 0 || order >= n)
    {
        throw std::invalid_argument("fd_weights: need more nodes than the derivative order");
    }
    // c[j][k]: weight of node j for derivative k
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i)
    {
        int const mn = std::min(i, order);
        double c2 = 1.0;
        double const c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j)
        {
            double const c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1)
            {
                for (int k = mn; k >= 1; --k)
                {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
            {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j)
    {
        w[j] = c[j][order];
    }
    return w;
}

double one_sided_derivative(std::function<double(double)> const& f,
                            double x0,
                            double h,
                            int order,
                            int n_nodes,
                            double sign)
{
    // Work in the scaled offset variable t = sign*j so weights are O(1).
    std::vector<double> t(n_nodes);
    for (int j = 0; j < n_nodes; ++j)
    {
        t[j] = sign * j;
    }
    auto const w = fd_weights(0.0, t, order);
    double acc = 0.0;
    for (int j = 0; j < n_nodes; ++j)
    {
        acc += w[j] * f(x0 + t[j] * h);
    }
    return acc / std::pow(h, order);
}

std::vector<double> richardson_diagonal(std::span<double const> estimates, int first_power)
{
    std::vector<double> prev(estimates.begin(), estimates.end());
    std::vector<double> diag{prev.front()};
    for (int level = 1; level < static_cast<int>(estimates.size()); ++level)
    {
        double const factor = std::ldexp(1.0, first_power + level - 1) - 1.0;
        std::vector<double> next(prev.size() - 1);
        for (std::size_t i = 0; i + 1 < prev.size(); ++i)
        {
            next[i] = prev[i + 1] + (prev[i + 1] - prev[i]) / factor;
        }
        diag.push_back(next.front());
        prev = std::move(next);
    }
    return diag;
}

Bracket bisect_predicate(std::function<bool(double)> const& holds,
                         double good,
                         double bad,
                         double width)
{
    while (std::abs(bad - good) > width)
    {
        double const mid = 0.5 * (good + bad);
        if (mid == good || mid == bad)
        {
            break;
        }
        if (holds(mid))
        {
            good = mid;
        }
        else
        {
            bad = mid;
        }
    }
    return {good, bad};
}

LineFit fit_line(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size() || x.size() < 2)
    {
        throw std::invalid_argument("fit_line: need at least two paired samples");
    }
    LineFit fit;
    fit.n = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= fit.n;
    my /= fit.n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
    }
    fit.rms_residual = std::sqrt(ss / fit.n);
    if (fit.n > 2 && sxx > 0)
    {
        fit.slope_stderr = std::sqrt(ss / (fit.n - 2) / sxx);
    }
    return fit;
}

double student_t_quantile(double alpha, int dof)
{
    boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, alpha / 2));
}

}  // namespace pogorelov::numerics
