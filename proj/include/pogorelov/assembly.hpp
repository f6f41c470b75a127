#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "pogorelov/profile.hpp"

namespace pogorelov
{

//! Disc n: center (1/n, 0), radius 1/(2(n+1)^2).
struct Disc
{
    int n = 0;
    double cx = 0;
    double cy = 0;
    double radius = 0;
};

struct DiscLayout
{
    std::vector<Disc> entries;
    int n_max = 0;
};

struct LayoutCheck
{
    long overlaps = 0;          //!< pairs of closed discs that intersect
    long contains_origin = 0;
    double min_gap = 0;         //!< smallest boundary-to-boundary distance
};

double disc_radius(int n);

//! Builds discs 1..n_max and verifies them; throws InternalConsistencyError
//! if any pair intersects or a disc reaches the origin.
DiscLayout build_layout(int n_max);

//! Disjointness sweep along the x-axis (all centers are collinear, so the
//! discs are disjoint exactly when their x-extents are).
LayoutCheck check_layout(DiscLayout const& layout);

struct WorkingDomain
{
    double x_lo = -0.1;
    double x_hi = 1.2;
    double y_lo = -0.2;
    double y_hi = 0.2;
};

//! Value and partial derivatives of the metric at one point. d1 = {d/dx,
//! d/dy}; d2 = {d2/dx2, d2/dxdy, d2/dy2}.
struct MetricJet
{
    Eigen::Matrix2d value = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d deviation = Eigen::Matrix2d::Zero();  //!< value - identity, without cancellation
    std::array<Eigen::Matrix2d, 2> d1{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
    std::array<Eigen::Matrix2d, 3> d2{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero(),
                                      Eigen::Matrix2d::Zero()};
};

//! w(rho) = (f^2 - rho^2) / rho^4 and its first two rho-derivatives, so that
//! the Cartesian metric is delta + w [[Y^2, -XY], [-XY, X^2]].
std::array<double, 3> radial_weight(RadialProfile const& p, double rho);

//! Flat metric on the plane with a Pogorelov metric of parameter a = radius
//! placed in each disc of the layout.
class MetricField
{
  public:
    explicit MetricField(DiscLayout layout, WorkingDomain domain = {});

    DiscLayout const& layout() const { return layout_; }
    WorkingDomain const& domain() const { return domain_; }

    //! Index into layout().entries of the disc whose interior holds (x, y).
    std::optional<std::size_t> locate(double x, double y) const;

    Eigen::Matrix2d eval(double x, double y) const;
    MetricJet jet(double x, double y) const;

    //! Jet of the single-disc metric h_n, evaluated as if no other disc existed.
    MetricJet disc_jet(std::size_t index, double x, double y) const;

  private:
    DiscLayout layout_;
    WorkingDomain domain_;
    std::vector<RadialProfile> profiles_;
};

Eigen::Matrix2d eval_metric(MetricField const& field, double x, double y);

//! order 1: {d/dx, d/dy}; order 2: {xx, xy, yy}.
std::vector<Eigen::Matrix2d> metric_derivatives(MetricField const& field, double x, double y, int order);

//! Radial metric d rho^2 + f^2 d theta^2 pushed to Cartesian components
//! through the polar Jacobian, for checking the closed form.
Eigen::Matrix2d polar_pullback(RadialProfile const& p, double rho, double theta);

void write_layout_json(DiscLayout const& layout, std::ostream& os);
void write_metric_grid_csv(MetricField const& field, int nx, int ny, std::ostream& os);

}  // namespace pogorelov
