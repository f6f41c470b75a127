#pragma once

#include <vector>

#include "pogorelov/profile.hpp"

namespace pogorelov
{

struct CurvatureSample
{
    double rho = 0;
    double k_formula = 0;  //!< -f''/f
    double k_closed = 0;   //!< rational closed form (NaN off (a/2, a])
    double k_fd = 0;       //!< finite differences of sqrt(G), G = f^2
    double abs_err = 0;    //!< |k_formula - k_closed| where both exist
};

//! Gauss curvature -f''/f of d rho^2 + f^2 d theta^2; at rho = 0 the limit
//! -f'''(0)/f'(0).
double gauss_curvature(RadialProfile const& p, double rho);

//! Rational form of -f''/f for the Pogorelov profile, defined on [a/2, a].
double closed_form_K(double a, double r);

//! Central (or one-sided, never crossing the branch point) second difference
//! of sqrt(G) with step max(1e-5 a, eps^(1/3) a).
double finite_difference_K(RadialProfile const& p, double rho);

//! Step used by finite_difference_K.
double curvature_fd_step(double a);

std::vector<CurvatureSample> curvature_samples(RadialProfile const& p, std::vector<double> const& rhos);

struct ExpansionFit
{
    double c1 = 0;  //!< coefficient of (rho - a/2)
    double c2 = 0;  //!< coefficient of (rho - a/2)^2
    int n_points = 0;
};

//! Least squares K ~ c1 u + c2 u^2, u = rho - a/2, over u in (0, eps_fit].
ExpansionFit expansion_fit(RadialProfile const& p, double eps_fit, int n_grid = 64);

//! Taylor coefficients c_1..c_order of K = -f''/f in u = rho - a/2 on the
//! outer branch, from exact polynomial arithmetic on f(a/2 + u).
std::vector<double> expansion_series(double a, int order);

//! Largest eps with K(rho) > coeff (rho - a/2) on (a/2, a/2 + eps), resolved
//! to 1e-6 a. Returns 0 when the bound already fails at the first resolved
//! offset.
double lower_bound_window(RadialProfile const& p, double coeff);

}  // namespace pogorelov
