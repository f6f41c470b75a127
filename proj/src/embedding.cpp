#include "pogorelov/embedding.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Geometry>
#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/numerics.hpp"

namespace pogorelov
{

namespace
{
constexpr double kRadicandSlack = 1e-14;
constexpr int kLimitLevels = 6;

struct LimitEstimate
{
    std::vector<double> diagonal;
    bool converged = false;
};

//! lim_{h->0+} g(x0 + sign*h) assuming g is smooth in h on (0, h0].
LimitEstimate one_sided_limit(std::function<double(double)> const& g, double x0, double sign, double h0)
{
    std::vector<double> est;
    for (int k = 0; k < kLimitLevels; ++k)
    {
        est.push_back(g(x0 + sign * std::ldexp(h0, -k)));
    }
    LimitEstimate out;
    out.diagonal = numerics::richardson_diagonal(est, 1);
    double const last = out.diagonal.back();
    double const prev = out.diagonal[out.diagonal.size() - 2];
    out.converged = std::abs(last - prev) <= 1e-3 * std::max(std::abs(last), 1e-300)
                    || std::abs(last - prev) <= 1e-14;
    return out;
}

bool locally_flat(RadialProfile const& p, double rho, Side side)
{
    for (int k = 1; k <= 3; ++k)
    {
        if (p.deviation_one_sided(rho, k, side) != 0.0)
        {
            return false;
        }
    }
    return true;
}

double slope_from_radicand(double radicand, double rho)
{
    if (radicand < 0.0)
    {
        if (radicand < -kRadicandSlack)
        {
            throw InternalConsistencyError(
                fmt::format("negative radicand {} at rho = {}: |f'| > 1 inside the window", radicand, rho));
        }
        return 0.0;
    }
    return std::sqrt(radicand);
}

double curvature_formula(RadialProfile const& p, double rho, Side side)
{
    double const d1 = p.deviation_one_sided(rho, 1, side);
    double const fp = 1.0 + d1;
    double const fpp = p.eval_one_sided(rho, 2, side);
    double const dz = slope_from_radicand(-d1 * (2.0 + d1), rho);
    return -fpp * fp / dz;
}

double integrate_adaptive(std::function<double(double)> const& g,
                          double lo,
                          double hi,
                          double tol,
                          int depth,
                          double& err)
{
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double e = 0.0;
    double const v = Rule::integrate(g, lo, hi, 0, 0.0, &e);
    if (e <= tol || depth >= 40)
    {
        err += e;
        return v;
    }
    double const mid = 0.5 * (lo + hi);
    return integrate_adaptive(g, lo, mid, 0.5 * tol, depth + 1, err)
           + integrate_adaptive(g, mid, hi, 0.5 * tol, depth + 1, err);
}

std::vector<double> geometric_steps(double first, double ratio, double target)
{
    std::vector<double> steps;
    for (double h = first; h < target; h *= ratio)
    {
        steps.push_back(h);
    }
    return steps;
}

std::vector<double> sample_positions(double window_start,
                                     double rho_max,
                                     double a,
                                     CurveSampling const& s)
{
    std::vector<double> pts;
    if (s.n_uniform > 0)
    {
        if (s.n_uniform < 3)
        {
            throw ConfigurationError("uniform sampling needs at least 3 samples");
        }
        for (int i = 0; i < s.n_uniform; ++i)
        {
            pts.push_back(rho_max * i / (s.n_uniform - 1));
        }
        pts.back() = rho_max;
        return pts;
    }
    if (s.n_flat < 1 || s.n_window < 1 || !(s.ratio > 1.0) || !(s.first_step > 0.0))
    {
        throw ConfigurationError("invalid curve sampling parameters");
    }
    double const flat_end = std::min(window_start, rho_max);
    if (flat_end > 0.0)
    {
        for (int i = 0; i < s.n_flat; ++i)
        {
            pts.push_back(flat_end * i / s.n_flat);
        }
    }
    pts.push_back(flat_end);
    if (rho_max <= window_start)
    {
        return pts;
    }

    double const length = rho_max - window_start;
    double const uniform = length / s.n_window;
    auto const steps = geometric_steps(s.first_step * a, s.ratio, uniform);
    double graded = 0.0;
    for (double h : steps)
    {
        graded += h;
    }
    std::vector<double> window;
    if (2.0 * graded >= length)
    {
        // Window too short for full grading: uniform fill only.
        for (int i = 1; i <= s.n_window; ++i)
        {
            window.push_back(window_start + length * i / s.n_window);
        }
    }
    else
    {
        double x = window_start;
        for (double h : steps)
        {
            x += h;
            window.push_back(x);
        }
        double const middle = length - 2.0 * graded;
        int const n_mid = std::max(1, static_cast<int>(std::ceil(middle / uniform)));
        double const mid_start = x;
        for (int i = 1; i <= n_mid; ++i)
        {
            window.push_back(mid_start + middle * i / n_mid);
        }
        double y = rho_max - graded;
        for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        {
            y += *it;
            window.push_back(y);
        }
    }
    window.back() = rho_max;
    for (double w : window)
    {
        if (w > pts.back())
        {
            pts.push_back(w);
        }
    }
    return pts;
}

}  // namespace

double meridian_slope(RadialProfile const& p, double rho, Side side)
{
    double const d1 = p.deviation_one_sided(rho, 1, side);
    return slope_from_radicand(-d1 * (2.0 + d1), rho);
}

double meridian_curvature(RadialProfile const& p, double rho, Side side)
{
    if (locally_flat(p, rho, side))
    {
        return 0.0;
    }
    if (meridian_slope(p, rho, side) > 0.0)
    {
        return curvature_formula(p, rho, side);
    }
    double const sign = side == Side::right ? 1.0 : -1.0;
    auto g = [&p, side](double x) { return curvature_formula(p, x, side); };
    return one_sided_limit(g, rho, sign, 1e-2 * p.a()).diagonal.back();
}

double embeddable_limit(RadialProfile const& p)
{
    double const a = p.a();
    double const start = p.branch_point().value_or(0.0);
    auto ok = [&p](double x) {
        return !(p.deviation(x, 1) > 0.0) && !(p.eval(x, 1) < -1.0);
    };
    constexpr int n = 2000;
    double prev = start;
    for (int i = 1; i < n; ++i)
    {
        double const x = start + (a - start) * i / n;
        if (!ok(x))
        {
            return numerics::bisect_predicate(ok, prev, x, 1e-12 * a).good;
        }
        prev = x;
    }
    return a;
}

double ProfileCurve::z_at(double rho) const
{
    if (samples.empty() || rho < samples.front().rho || rho > samples.back().rho)
    {
        throw DomainError(fmt::format("rho = {} outside the sampled curve", rho));
    }
    auto it = std::lower_bound(samples.begin(), samples.end(), rho,
                               [](ProfileSample const& s, double x) { return s.rho < x; });
    if (it == samples.begin())
    {
        return it->z;
    }
    auto const& hi = *it;
    auto const& lo = *(it - 1);
    double const h = hi.rho - lo.rho;
    double const t = (rho - lo.rho) / h;
    double const t2 = t * t;
    double const t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * lo.z + (t3 - 2 * t2 + t) * h * lo.dz + (-2 * t3 + 3 * t2) * hi.z
           + (t3 - t2) * h * hi.dz;
}

ProfileCurve integrate_profile(RadialProfile const& p, double rho_max, double tol, CurveSampling const& sampling)
{
    if (!(tol > 0.0))
    {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (!(rho_max > 0.0) || !p.in_domain(rho_max))
    {
        throw DomainError(fmt::format("rho_max = {} outside (0, {})", rho_max, p.a()));
    }
    ProfileCurve curve{p};
    curve.rho_max = rho_max;
    curve.tol = tol;
    curve.window_start = p.branch_point().value_or(0.0);
    curve.window_end = embeddable_limit(p);
    if (rho_max >= curve.window_end)
    {
        throw DomainError(fmt::format(
            "rho_max = {} reaches the end of the embeddable window ({}, {}); |f'| >= 1 beyond it",
            rho_max, curve.window_start, curve.window_end));
    }

    auto const pts = sample_positions(curve.window_start, rho_max, p.a(), sampling);
    double const split = curve.window_start + 0.5 * (curve.window_end - curve.window_start);
    double const rho_end = curve.window_end;
    double const panel_tol = tol / static_cast<double>(pts.size());

    auto slope = [&p](double x) { return meridian_slope(p, x); };
    // rho = rho_end - s^2 removes the square-root behaviour at rho_end.
    auto slope_sub = [&p, rho_end](double s) { return 2.0 * s * meridian_slope(p, rho_end - s * s); };

    double z = 0.0;
    double err = 0.0;
    auto const bp = p.branch_point();
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        double const rho = pts[i];
        if (i > 0)
        {
            double const lo = pts[i - 1];
            if (lo >= split)
            {
                z += integrate_adaptive(slope_sub, std::sqrt(rho_end - rho), std::sqrt(rho_end - lo),
                                        panel_tol, 0, err);
            }
            else
            {
                z += integrate_adaptive(slope, lo, rho, panel_tol, 0, err);
            }
        }
        ProfileSample s;
        s.rho = rho;
        s.r = p.eval(rho, 0);
        s.z = z;
        s.dz = meridian_slope(p, rho);
        if (bp && rho == *bp)
        {
            s.d2z_left = meridian_curvature(p, rho, Side::left);
            s.d2z_right = meridian_curvature(p, rho, Side::right);
        }
        else
        {
            s.d2z_left = s.d2z_right = meridian_curvature(p, rho, Side::right);
        }
        curve.samples.push_back(s);
    }
    curve.error_estimate = err;
    return curve;
}

JumpReport jump_analysis(ProfileCurve const& c)
{
    auto const bp = c.profile.branch_point();
    if (!bp)
    {
        throw ConfigurationError("jump analysis needs a profile with a branch point");
    }
    if (c.samples.empty() || c.samples.front().rho >= *bp || c.samples.back().rho <= *bp)
    {
        throw ConfigurationError("curve must contain samples on both sides of the branch point");
    }
    auto const& p = c.profile;
    JumpReport report;
    report.location = *bp;
    if (locally_flat(p, *bp, Side::left))
    {
        report.left_limit = 0.0;
    }
    else
    {
        auto g = [&p](double x) { return curvature_formula(p, x, Side::left); };
        report.left_limit = one_sided_limit(g, *bp, -1.0, 1e-2 * p.a()).diagonal.back();
    }
    auto g = [&p](double x) { return curvature_formula(p, x, Side::right); };
    double const h0 = std::min(1e-2 * p.a(), 0.5 * (c.rho_max - *bp));
    auto const lim = one_sided_limit(g, *bp, 1.0, h0);
    report.right_estimates = lim.diagonal;
    report.right_limit = lim.diagonal.back();
    report.converged = lim.converged;
    return report;
}

//---------------------------------------------------------------------------//

RevolutionMesh build_mesh(ProfileCurve const& c, int n_theta)
{
    if (n_theta < 8)
    {
        throw ConfigurationError(fmt::format("n_theta = {} below the minimum of 8", n_theta));
    }
    if (c.samples.size() < 3)
    {
        throw ConfigurationError("degenerate curve: fewer than 3 rho samples");
    }
    if (c.samples.front().rho != 0.0)
    {
        throw ConfigurationError("curve must start at the apex rho = 0");
    }
    RevolutionMesh m{c};
    m.n_rho = static_cast<int>(c.samples.size());
    m.n_theta = n_theta;
    m.vertices.emplace_back(0.0, 0.0, c.samples.front().z);
    m.params.emplace_back(0.0, 0.0);
    for (std::size_t i = 1; i < c.samples.size(); ++i)
    {
        auto const& s = c.samples[i];
        for (int j = 0; j < n_theta; ++j)
        {
            double const theta = 2.0 * std::numbers::pi * j / n_theta;
            m.vertices.emplace_back(s.r * std::cos(theta), s.r * std::sin(theta), s.z);
            m.params.emplace_back(s.rho, theta);
        }
    }
    auto vid = [n_theta](int row, int j) { return 1 + (row - 1) * n_theta + (j % n_theta); };
    for (int j = 0; j < n_theta; ++j)
    {
        m.faces.push_back({0, vid(1, j), vid(1, j + 1)});
    }
    for (int row = 1; row + 1 < m.n_rho; ++row)
    {
        for (int j = 0; j < n_theta; ++j)
        {
            int const a = vid(row, j);
            int const b = vid(row, j + 1);
            int const cc = vid(row + 1, j + 1);
            int const d = vid(row + 1, j);
            m.faces.push_back({a, d, cc});
            m.faces.push_back({a, cc, b});
        }
    }
    return m;
}

int euler_characteristic(RevolutionMesh const& m)
{
    std::set<std::pair<int, int>> edges;
    for (auto const& f : m.faces)
    {
        for (int k = 0; k < 3; ++k)
        {
            int const i = f[k];
            int const j = f[(k + 1) % 3];
            edges.emplace(std::min(i, j), std::max(i, j));
        }
    }
    return static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size())
           + static_cast<int>(m.faces.size());
}

namespace
{
std::vector<bool> boundary_flags(RevolutionMesh const& m)
{
    std::vector<bool> b(m.vertices.size(), false);
    int const first = 1 + (m.n_rho - 2) * m.n_theta;
    for (std::size_t v = first; v < m.vertices.size(); ++v)
    {
        b[v] = true;
    }
    return b;
}
}  // namespace

std::vector<double> discrete_gauss_curvature(RevolutionMesh const& m)
{
    std::vector<double> angle(m.vertices.size(), 0.0);
    std::vector<double> area(m.vertices.size(), 0.0);
    for (auto const& f : m.faces)
    {
        Eigen::Vector3d const& p0 = m.vertices[f[0]];
        Eigen::Vector3d const& p1 = m.vertices[f[1]];
        Eigen::Vector3d const& p2 = m.vertices[f[2]];
        double const tri_area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
        std::array<Eigen::Vector3d const*, 3> p{&p0, &p1, &p2};
        for (int k = 0; k < 3; ++k)
        {
            Eigen::Vector3d const e1 = *p[(k + 1) % 3] - *p[k];
            Eigen::Vector3d const e2 = *p[(k + 2) % 3] - *p[k];
            angle[f[k]] += std::atan2(e1.cross(e2).norm(), e1.dot(e2));
            area[f[k]] += tri_area / 3.0;
        }
    }
    auto const boundary = boundary_flags(m);
    std::vector<double> k(m.vertices.size());
    for (std::size_t v = 0; v < k.size(); ++v)
    {
        k[v] = boundary[v] ? std::nan("") : (2.0 * std::numbers::pi - angle[v]) / area[v];
    }
    return k;
}

std::vector<double> discrete_mean_curvature(RevolutionMesh const& m)
{
    std::vector<Eigen::Vector3d> lap(m.vertices.size(), Eigen::Vector3d::Zero());
    std::vector<double> area(m.vertices.size(), 0.0);
    for (auto const& f : m.faces)
    {
        double const tri_area =
            0.5 * (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]).norm();
        for (int k = 0; k < 3; ++k)
        {
            int const i = f[k];
            int const j = f[(k + 1) % 3];
            int const o = f[(k + 2) % 3];
            Eigen::Vector3d const e1 = m.vertices[i] - m.vertices[o];
            Eigen::Vector3d const e2 = m.vertices[j] - m.vertices[o];
            double const cot = e1.dot(e2) / e1.cross(e2).norm();
            lap[i] += cot * (m.vertices[j] - m.vertices[i]);
            lap[j] += cot * (m.vertices[i] - m.vertices[j]);
            area[i] += tri_area / 3.0;
        }
    }
    auto const boundary = boundary_flags(m);
    std::vector<double> h(m.vertices.size());
    for (std::size_t v = 0; v < h.size(); ++v)
    {
        h[v] = boundary[v] ? std::nan("") : lap[v].norm() / (4.0 * area[v]);
    }
    return h;
}

//---------------------------------------------------------------------------//

MetricResidual induced_metric_residual(RadialProfile const& p,
                                       std::function<double(double)> const& dz,
                                       ResidualGrid const& grid)
{
    if (grid.n_rho < 1 || grid.n_theta < 1)
    {
        throw ConfigurationError("residual grid must be nonempty");
    }
    MetricResidual res;
    for (int i = 0; i < grid.n_rho; ++i)
    {
        double const rho = grid.n_rho == 1
                               ? grid.rho_lo
                               : grid.rho_lo + (grid.rho_hi - grid.rho_lo) * i / (grid.n_rho - 1);
        double const f = p.eval(rho, 0);
        double const fp = p.eval(rho, 1);
        double const zp = dz(rho);
        for (int j = 0; j < grid.n_theta; ++j)
        {
            double const theta = 2.0 * std::numbers::pi * j / grid.n_theta;
            double const c = std::cos(theta);
            double const s = std::sin(theta);
            Eigen::Vector3d const x_rho(fp * c, fp * s, zp);
            Eigen::Vector3d const x_theta(-f * s, f * c, 0.0);
            res.max_e = std::max(res.max_e, std::abs(x_rho.dot(x_rho) - 1.0));
            res.max_f = std::max(res.max_f, std::abs(x_rho.dot(x_theta)));
            res.max_g = std::max(res.max_g, std::abs(x_theta.dot(x_theta) - f * f));
        }
    }
    return res;
}

MetricResidual induced_metric_residual(RadialProfile const& p, ProfileCurve const& c, ResidualGrid const& grid)
{
    if (grid.rho_lo < 0.0 || grid.rho_hi > c.rho_max)
    {
        throw DomainError("residual grid must lie inside [0, rho_max]");
    }
    return induced_metric_residual(p, [&c](double rho) { return meridian_slope(c.profile, rho); }, grid);
}

MeanCurvatureRow principal_curvatures(RadialProfile const& p, double rho, double dz, double d2z_left,
                                      double d2z_right)
{
    MeanCurvatureRow row;
    row.rho = rho;
    double const f = p.eval(rho, 0);
    double const fp = p.eval(rho, 1);
    double const fpp = p.eval(rho, 2);
    auto meridian = [&](double d2z) { return fp * d2z - dz * fpp; };
    auto circumferential = [&](double d2z) { return rho == 0.0 ? d2z / fp : dz / f; };
    row.k_meridian = meridian(d2z_right);
    row.k_circumferential = circumferential(d2z_right);
    row.mean = 0.5 * (row.k_meridian + row.k_circumferential);
    row.mean_left = 0.5 * (meridian(d2z_left) + circumferential(d2z_left));
    row.one_sided = d2z_left != d2z_right;
    return row;
}

namespace
{
constexpr double kZeroMean = 1e-12;

int sign_of(double h)
{
    return h > kZeroMean ? 1 : (h < -kZeroMean ? -1 : 0);
}

double mean_at(RadialProfile const& p, double rho)
{
    double const d2z = meridian_curvature(p, rho, Side::right);
    return principal_curvatures(p, rho, meridian_slope(p, rho), d2z, d2z).mean;
}
}  // namespace

MeanCurvatureReport mean_curvature_scan(RevolutionMesh const& m)
{
    MeanCurvatureReport report;
    auto const& p = m.curve.profile;
    int last_sign = 0;
    double last_rho = 0.0;
    for (auto const& s : m.curve.samples)
    {
        auto row = principal_curvatures(p, s.rho, s.dz, s.d2z_left, s.d2z_right);
        int const sg = sign_of(row.mean);
        int const sg_left = sign_of(row.mean_left);
        for (int v : {sg, sg_left})
        {
            if (v != 0 && last_sign != 0 && v != last_sign && !report.sign_change)
            {
                auto holds = [&](double x) { return sign_of(mean_at(p, x)) == last_sign; };
                report.sign_change = numerics::bisect_predicate(holds, last_rho, s.rho, 1e-12 * p.a()).good;
            }
        }
        if (sg > 0)
            ++report.n_positive;
        else if (sg < 0)
            ++report.n_negative;
        else
            ++report.n_zero;
        if (sg != 0)
        {
            last_sign = sg;
            last_rho = s.rho;
        }
        report.rows.push_back(row);
    }
    if (report.n_positive > 0 && report.n_negative > 0)
        report.sign = SignClass::mixed;
    else if (report.n_positive > 0)
        report.sign = SignClass::positive;
    else if (report.n_negative > 0)
        report.sign = SignClass::negative;
    else
        report.sign = SignClass::zero;
    return report;
}

char const* to_string(SignClass s)
{
    switch (s)
    {
        case SignClass::zero:
            return "zero";
        case SignClass::positive:
            return "positive";
        case SignClass::negative:
            return "negative";
        case SignClass::mixed:
            return "mixed";
    }
    return "?";
}

void write_obj(RevolutionMesh const& m, std::ostream& os)
{
    os << fmt::format("# pogorelov a={:.17g} rho_max={:.17g}\n", m.curve.a(), m.curve.rho_max);
    for (auto const& v : m.vertices)
    {
        os << fmt::format("v {:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
    }
    for (auto const& f : m.faces)
    {
        os << fmt::format("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
}

void write_curve_csv(ProfileCurve const& c, std::ostream& os)
{
    os << "rho,r,z,dz,d2z_left,d2z_right\n";
    for (auto const& s : c.samples)
    {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.rho, s.r, s.z, s.dz,
                          s.d2z_left, s.d2z_right);
    }
}

}  // namespace pogorelov
