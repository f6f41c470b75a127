#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pogorelov
{

enum class Side
{
    left,
    right
};

//! Radial function f of a metric d rho^2 + f(rho)^2 d theta^2 on [0, a).
//!
//! Derivatives through order 3 come from hand-derived closed forms. At a
//! branch point the right-branch value is returned; use eval_one_sided to
//! get the left limit.
class RadialProfile
{
  public:
    enum class Kind
    {
        pogorelov,  //!< rho, then rho + a (rho-a)^3 (rho-a/2)^3 past a/2
        flat,       //!< rho
        sphere,     //!< sin(rho), requires a <= pi
        hyperbolic  //!< sinh(rho)
    };

    RadialProfile(Kind kind, double a);

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    std::string name() const;

    //! k-th derivative of f, k in 0..3, rho in [0, a).
    double eval(double rho, int k) const;

    //! One-sided limit of the k-th derivative.
    double eval_one_sided(double rho, int k, Side side) const;

    //! k-th derivative of f(rho) - rho, evaluated without cancellation.
    double deviation(double rho, int k) const;
    double deviation_one_sided(double rho, int k, Side side) const;

    //! Point where the piecewise definition switches branches, if any.
    std::optional<double> branch_point() const;

    bool in_domain(double rho) const { return rho >= 0.0 && rho < a_; }

  private:
    Kind kind_;
    double a_;

    double pogorelov_deviation(double rho, int k, Side side) const;
    void check(double rho, int k) const;
};

RadialProfile make_pogorelov_profile(double a);
RadialProfile make_flat_profile(double a);
RadialProfile make_sphere_profile(double a);
RadialProfile make_hyperbolic_profile(double a);

//---------------------------------------------------------------------------//
// Regularity diagnostics at a single point
//---------------------------------------------------------------------------//

struct OrderLimits
{
    int order = 0;
    double fd_left = 0;   //!< Richardson-extrapolated one-sided estimate
    double fd_right = 0;
    double exact_left = 0;
    double exact_right = 0;
    double jump = 0;      //!< |exact_right - exact_left|
    double fd_jump = 0;   //!< |fd_right - fd_left|
};

struct SmoothnessReport
{
    double rho0 = 0;
    double h_min = 0;
    std::array<OrderLimits, 4> orders{};
};

//! One-sided limits of f..f''' at rho0 from both sides.
//!
//! Finite differences use steps 8 h_min, 4 h_min, 2 h_min, h_min and one-sided
//! stencils of formal order 4 before extrapolation; the widest stencil spans
//! 48 h_min and must fit inside the domain on both sides.
SmoothnessReport smoothness_report(RadialProfile const& p, double rho0, double h_min);

struct Interval
{
    double lo;
    double hi;
};

//! Maximal sub-intervals of (0, a) where f' < 1.
std::vector<Interval> embeddable_window(RadialProfile const& p, int grid_n);

}  // namespace pogorelov
