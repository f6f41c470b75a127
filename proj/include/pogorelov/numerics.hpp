#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pogorelov::numerics
{

//! Finite-difference weights for the derivative of order `order` at x0 using
//! arbitrary distinct nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<double const> nodes, int order);

//! One-sided derivative estimate from nodes x0 + sign*j*h, j = 0..n_nodes-1.
double one_sided_derivative(std::function<double(double)> const& f,
                            double x0,
                            double h,
                            int order,
                            int n_nodes,
                            double sign);

//! Richardson table for estimates taken at h, h/2, h/4, ... whose error
//! expansion starts at h^first_power and continues in consecutive powers.
//! Returns the diagonal of the table (last element is the best estimate).
std::vector<double> richardson_diagonal(std::span<double const> estimates, int first_power);

//! Shrink [good, bad] around the switch point of `holds`, which must be true
//! at `good` and false at `bad`. Returns the final pair.
struct Bracket
{
    double good;
    double bad;
};
Bracket bisect_predicate(std::function<bool(double)> const& holds,
                         double good,
                         double bad,
                         double width);

//! Ordinary least squares y ~ slope*x + intercept.
struct LineFit
{
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    double max_residual = 0;
    double rms_residual = 0;
    int n = 0;
};
LineFit fit_line(std::span<double const> x, std::span<double const> y);

//! Two-sided Student-t quantile for a (1 - alpha) confidence interval.
double student_t_quantile(double alpha, int dof);

}  // namespace pogorelov::numerics
