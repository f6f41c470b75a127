#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "pogorelov/profile.hpp"

namespace pogorelov
{

//! Sample of the generating curve rho -> (r, z) with r = f(rho).
struct ProfileSample
{
    double rho = 0;
    double r = 0;
    double z = 0;
    double dz = 0;         //!< sqrt(1 - f'^2)
    double d2z_left = 0;   //!< one-sided z'' (differs from right only at a branch point)
    double d2z_right = 0;
};

struct CurveSampling
{
    int n_flat = 32;          //!< uniform samples on [0, window start]
    int n_window = 128;       //!< uniform spacing target inside the window
    double first_step = 1e-5; //!< first geometric step next to each end, times a
    double ratio = 1.2;       //!< geometric growth toward the uniform spacing
    int n_uniform = 0;        //!< if > 0: n_uniform equispaced samples on [0, rho_max]
};

//! Generating curve of the theta-preserving surface-of-revolution embedding.
struct ProfileCurve
{
    RadialProfile profile;
    double rho_max = 0;
    double window_start = 0;  //!< where the radicand 1 - f'^2 stops vanishing identically
    double window_end = 0;    //!< first point past which |f'| > 1
    double tol = 0;
    double error_estimate = 0;  //!< accumulated quadrature error bound at rho_max
    std::vector<ProfileSample> samples{};

    double a() const { return profile.a(); }
    //! Cubic Hermite interpolation of z using the exact slope at the samples.
    double z_at(double rho) const;
};

//! z'(rho) = sqrt(1 - f'(rho)^2), formed from f' - 1 to avoid cancellation.
double meridian_slope(RadialProfile const& p, double rho, Side side = Side::right);

//! One-sided z''; where z' = 0 outside a flat stretch the limit is
//! extrapolated from the given side.
double meridian_curvature(RadialProfile const& p, double rho, Side side);

//! Right end of the admissible region: first rho past the window start where
//! |f'| > 1, or a if there is none.
double embeddable_limit(RadialProfile const& p);

//! z(rho) = int_0^rho sqrt(1 - f'(t)^2) dt on a graded sample set. Every
//! sample's z carries absolute error at most tol.
ProfileCurve integrate_profile(RadialProfile const& p, double rho_max, double tol,
                               CurveSampling const& sampling = {});

struct JumpReport
{
    double location = 0;
    double left_limit = 0;
    double right_limit = 0;
    std::vector<double> right_estimates;  //!< Richardson diagonal
    bool converged = false;
};

//! Limits of z'' from both sides of the profile's branch point.
JumpReport jump_analysis(ProfileCurve const& c);

struct RevolutionMesh
{
    ProfileCurve curve;
    int n_rho = 0;
    int n_theta = 0;
    std::vector<Eigen::Vector3d> vertices{};
    std::vector<Eigen::Vector2d> params{}; //!< (rho, theta) per vertex
    std::vector<std::array<int, 3>> faces{};
};

//! Rotates the generating curve; single apex vertex at rho = 0, faces
//! oriented so the normal of the flat part points toward +z.
RevolutionMesh build_mesh(ProfileCurve const& c, int n_theta);

int euler_characteristic(RevolutionMesh const& m);

//! Angle defect over one third of the incident area; NaN on the boundary row.
std::vector<double> discrete_gauss_curvature(RevolutionMesh const& m);

//! |cotangent Laplacian of position| / 2; NaN on the boundary row.
std::vector<double> discrete_mean_curvature(RevolutionMesh const& m);

struct ResidualGrid
{
    double rho_lo = 0;
    double rho_hi = 0;
    int n_rho = 200;
    int n_theta = 64;
};

struct MetricResidual
{
    double max_e = 0;  //!< max |E - 1|
    double max_f = 0;  //!< max |F|
    double max_g = 0;  //!< max |G - f^2|
    double max() const { return std::max({max_e, max_f, max_g}); }
};

//! First fundamental form of (rho, theta) -> (f cos, f sin, z) against the
//! target metric d rho^2 + f^2 d theta^2.
MetricResidual induced_metric_residual(RadialProfile const& p,
                                       std::function<double(double)> const& dz,
                                       ResidualGrid const& grid);
MetricResidual induced_metric_residual(RadialProfile const& p,
                                       ProfileCurve const& c,
                                       ResidualGrid const& grid);

struct MeanCurvatureRow
{
    double rho = 0;
    double k_meridian = 0;
    double k_circumferential = 0;
    double mean = 0;       //!< uses right-sided z''
    double mean_left = 0;  //!< uses left-sided z''
    bool one_sided = false;
};

enum class SignClass
{
    zero,
    positive,
    negative,
    mixed
};

struct MeanCurvatureReport
{
    std::vector<MeanCurvatureRow> rows;
    int n_positive = 0;
    int n_negative = 0;
    int n_zero = 0;
    SignClass sign = SignClass::zero;
    std::optional<double> sign_change;  //!< first sign flip, refined by bisection
};

//! Analytic principal curvatures of the revolution surface with respect to
//! the normal (-z' cos, -z' sin, f').
MeanCurvatureRow principal_curvatures(RadialProfile const& p, double rho, double dz,
                                      double d2z_left, double d2z_right);

MeanCurvatureReport mean_curvature_scan(RevolutionMesh const& m);

char const* to_string(SignClass s);

void write_obj(RevolutionMesh const& m, std::ostream& os);
void write_curve_csv(ProfileCurve const& c, std::ostream& os);

}  // namespace pogorelov
