#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "pogorelov/embedding.hpp"

namespace pogorelov
{

//---------------------------------------------------------------------------//
// Convex-function second-derivative bound
//---------------------------------------------------------------------------//

//! A cos(kx x + phase_x) cos(ku u + phase_u)
struct TrigTerm
{
    double amplitude = 0;
    double kx = 0;
    double phase_x = 0;
    double ku = 0;
    double phase_u = 0;
};

//! w(x, u) = w0 + sum of terms; z is its double primitive in y from 0, so
//! z = z_x = z_y = 0 on y = 0 and z_yy = w.
struct TrigWeight
{
    double w0 = 1;
    std::vector<TrigTerm> terms;

    double w(double x, double y) const;
    double z(double x, double y) const;
    double z_x(double x, double y) const;
    double z_y(double x, double y) const;
    double z_xx(double x, double y) const;
    double z_xy(double x, double y) const;
    double z_yy(double x, double y) const { return w(x, y); }
};

struct ConvexCase
{
    double c = 0;
    double b = 0;
    TrigWeight weight;
    int grid = 64;
    std::vector<double> xs;  //!< grid over [-c, c]
    std::vector<double> ys;  //!< grid over [0, b]
    Eigen::MatrixXd z, z_xx, z_xy, z_yy;  //!< sampled at (xs[i], ys[j])
    double m = 0;  //!< min of z_yy over the rectangle (grid, then refined)
    double M = 0;  //!< max of z_yy over the rectangle
};

ConvexCase make_convex_case(TrigWeight const& weight, double c, double b, int grid = 64);

//! Name of the first hypothesis the case violates, if any.
std::optional<std::string> violated_hypothesis(ConvexCase const& cc);

struct ConvexCheck
{
    double lhs = 0;   //!< min over x of z_xx(x, b)
    double rhs = 0;   //!< (M - m) b^2 / c^2
    double x_at = 0;  //!< where lhs is attained
    bool pass = false;
};

//! Throws RejectedInputError naming the violated hypothesis.
ConvexCheck convex_bound_check(ConvexCase const& cc);

//! Box height 3 c^2 / a used for the graph patch next to an affine segment.
double proof_box_height(double a, double c);

struct GeneratorStats
{
    long attempts = 0;
    long accepted = 0;
};

//! Rejection-sampled convex cases; deterministic in seed.
std::vector<ConvexCase> generate_convex_cases(std::uint64_t seed, int count, double c, double b,
                                              GeneratorStats* stats = nullptr);

nlohmann::ordered_json archive_case(ConvexCase const& cc, ConvexCheck const* check = nullptr);

//---------------------------------------------------------------------------//
// Principal curvature along rulings of developable surfaces
//---------------------------------------------------------------------------//

//! X(t, v) = base(t) + v dir(t) with |dir| = 1.
struct RuledSurface
{
    std::string name;
    std::function<Eigen::Vector3d(double)> base, base_d1, base_d2;
    std::function<Eigen::Vector3d(double)> dir, dir_d1, dir_d2;

    Eigen::Vector3d point(double t, double v) const { return base(t) + v * dir(t); }
};

RuledSurface make_cylinder(double radius);
//! Circular cone with apex at the origin and the given half-angle.
RuledSurface make_cone(double half_angle);
//! Tangent developable of the helix (R cos s, R sin s, pitch s), s the turning
//! angle, reparametrized by arclength.
RuledSurface make_helix_tangent_developable(double radius, double pitch);

struct RuledSample
{
    std::string surface;
    double t0 = 0;
    std::vector<double> s;  //!< arclength along the generator from its first sample
    std::vector<double> k;  //!< nonzero principal curvature
    double max_abs_gauss = 0;
};

//! Samples the generator t = t0 at v in [v0, v1]. With fd_step > 0 the
//! t-derivatives are replaced by central differences of the point map.
RuledSample sample_ruling(RuledSurface const& surf, double t0, double v0, double v1, int count,
                          double fd_step = 0.0);

struct RulingFit
{
    double A = 0;
    double B = 0;
    double slope = 0;      //!< of 1/k against s, equals 1/A
    double intercept = 0;  //!< equals B/A
    double max_residual = 0;
};

//! Fits 1/k = (s + B)/A; rejects samples where k changes sign or vanishes.
RulingFit ruling_curvature_fit(RuledSample const& sample);

//---------------------------------------------------------------------------//
// Sagitta
//---------------------------------------------------------------------------//

struct SagittaResult
{
    double value = 0;
    bool above_lower = false;  //!< value >= c^2 / a
    bool below_upper = false;  //!< value <= 2 c^2 / a
};

//! Depth a/2 - sqrt(a^2/4 - c^2) of a chord of half-length c in the circle of
//! radius a/2, computed as c^2 / (a/2 + sqrt(a^2/4 - c^2)).
SagittaResult sagitta(double a, double c);

//---------------------------------------------------------------------------//
// Affine segments
//---------------------------------------------------------------------------//

struct DiscMap
{
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 1;
    std::function<Eigen::Vector3d(double, double)> phi;
};

struct AffineScanOptions
{
    int n_boundary = 64;  //!< boundary points, equally spaced in angle
    int n_chord = 33;     //!< samples along each chord including endpoints
};

struct Chord
{
    int i = 0;
    int j = 0;
    Eigen::Vector2d p, q;
    double length = 0;
    double deviation = 0;  //!< max distance of the image from the affine interpolant
};

//! Chords between boundary samples whose image deviates from the affine
//! interpolation of the endpoint images by less than tol * length, sorted by
//! length.
std::vector<Chord> affine_segment_detect(DiscMap const& map, double tol, AffineScanOptions const& opts = {});

//! Disc of the given radius about the origin of the (rho, theta) plane,
//! mapped by the surface of revolution of the curve.
DiscMap revolution_disc_map(ProfileCurve const& curve, double radius);

}  // namespace pogorelov
