#include "pogorelov/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/numerics.hpp"

namespace pogorelov
{

namespace
{
// Single and double primitives from 0 of cos(ku u + phase) in u.
double primitive1(TrigTerm const& t, double y)
{
    if (t.ku == 0.0)
    {
        return y * std::cos(t.phase_u);
    }
    return (std::sin(t.ku * y + t.phase_u) - std::sin(t.phase_u)) / t.ku;
}

double primitive2(TrigTerm const& t, double y)
{
    if (t.ku == 0.0)
    {
        return 0.5 * y * y * std::cos(t.phase_u);
    }
    return (std::cos(t.phase_u) - std::cos(t.ku * y + t.phase_u)) / (t.ku * t.ku)
           - y * std::sin(t.phase_u) / t.ku;
}

double x_part(TrigTerm const& t, double x, int order)
{
    double const arg = t.kx * x + t.phase_x;
    switch (order)
    {
        case 0:
            return std::cos(arg);
        case 1:
            return -t.kx * std::sin(arg);
        default:
            return -t.kx * t.kx * std::cos(arg);
    }
}

constexpr int kBrentBits = 52;

//! Local extremum of g near (x, y) by alternating 1-D Brent searches within a
//! window of +-dx, +-dy clipped to the rectangle. sign = +1 minimizes.
double refine_extremum(std::function<double(double, double)> const& g, double x, double y, double dx,
                       double dy, double c, double b, double sign)
{
    using boost::math::tools::brent_find_minima;
    for (int pass = 0; pass < 6; ++pass)
    {
        auto fx = [&](double xx) { return sign * g(xx, y); };
        x = brent_find_minima(fx, std::max(-c, x - dx), std::min(c, x + dx), kBrentBits).first;
        auto fy = [&](double yy) { return sign * g(x, yy); };
        y = brent_find_minima(fy, std::max(0.0, y - dy), std::min(b, y + dy), kBrentBits).first;
    }
    return g(x, y);
}
}  // namespace

double TrigWeight::w(double x, double y) const
{
    double acc = w0;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 0) * std::cos(t.ku * y + t.phase_u);
    }
    return acc;
}

double TrigWeight::z(double x, double y) const
{
    double acc = 0.5 * w0 * y * y;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 0) * primitive2(t, y);
    }
    return acc;
}

double TrigWeight::z_x(double x, double y) const
{
    double acc = 0.0;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 1) * primitive2(t, y);
    }
    return acc;
}

double TrigWeight::z_y(double x, double y) const
{
    double acc = w0 * y;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 0) * primitive1(t, y);
    }
    return acc;
}

double TrigWeight::z_xx(double x, double y) const
{
    double acc = 0.0;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 2) * primitive2(t, y);
    }
    return acc;
}

double TrigWeight::z_xy(double x, double y) const
{
    double acc = 0.0;
    for (auto const& t : terms)
    {
        acc += t.amplitude * x_part(t, x, 1) * primitive1(t, y);
    }
    return acc;
}

ConvexCase make_convex_case(TrigWeight const& weight, double c, double b, int grid)
{
    if (!(c > 0.0) || !(b > 0.0))
    {
        throw DomainError(fmt::format("rectangle [-c, c] x [0, b] needs c, b > 0 (c = {}, b = {})", c, b));
    }
    if (grid < 2)
    {
        throw ConfigurationError("convex case grid needs at least 2 points per axis");
    }
    ConvexCase cc;
    cc.c = c;
    cc.b = b;
    cc.weight = weight;
    cc.grid = grid;
    for (int i = 0; i < grid; ++i)
    {
        cc.xs.push_back(-c + 2.0 * c * i / (grid - 1));
        cc.ys.push_back(b * i / (grid - 1));
    }
    cc.xs.back() = c;
    cc.ys.back() = b;
    cc.z.resize(grid, grid);
    cc.z_xx.resize(grid, grid);
    cc.z_xy.resize(grid, grid);
    cc.z_yy.resize(grid, grid);
    Eigen::Index imin = 0, jmin = 0, imax = 0, jmax = 0;
    for (int i = 0; i < grid; ++i)
    {
        for (int j = 0; j < grid; ++j)
        {
            double const x = cc.xs[i];
            double const y = cc.ys[j];
            cc.z(i, j) = weight.z(x, y);
            cc.z_xx(i, j) = weight.z_xx(x, y);
            cc.z_xy(i, j) = weight.z_xy(x, y);
            cc.z_yy(i, j) = weight.z_yy(x, y);
        }
    }
    cc.m = cc.z_yy.minCoeff(&imin, &jmin);
    cc.M = cc.z_yy.maxCoeff(&imax, &jmax);
    double const dx = 2.0 * (2.0 * c / (grid - 1));
    double const dy = 2.0 * (b / (grid - 1));
    auto w = [&weight](double x, double y) { return weight.w(x, y); };
    cc.m = std::min(cc.m, refine_extremum(w, cc.xs[imin], cc.ys[jmin], dx, dy, c, b, 1.0));
    cc.M = std::max(cc.M, refine_extremum(w, cc.xs[imax], cc.ys[jmax], dx, dy, c, b, -1.0));
    return cc;
}

std::optional<std::string> violated_hypothesis(ConvexCase const& cc)
{
    constexpr double tol = 1e-10;
    for (double x : cc.xs)
    {
        if (std::abs(cc.weight.z_x(x, 0.0)) > tol || std::abs(cc.weight.z_y(x, 0.0)) > tol)
        {
            return fmt::format("z_x = z_y = 0 on y = 0 fails at x = {}", x);
        }
    }
    for (int i = 0; i < cc.grid; ++i)
    {
        for (int j = 0; j < cc.grid; ++j)
        {
            double const p = cc.z_xx(i, j);
            double const q = cc.z_xy(i, j);
            double const r = cc.z_yy(i, j);
            double const mean = 0.5 * (p + r);
            double const radius = std::hypot(0.5 * (p - r), q);
            if (mean - radius < -tol)
            {
                return fmt::format("convexity fails: Hessian eigenvalue {} at (x, y) = ({}, {})", mean - radius,
                                   cc.xs[i], cc.ys[j]);
            }
            if (r < cc.m || r > cc.M)
            {
                return fmt::format("m <= z_yy <= M fails at (x, y) = ({}, {})", cc.xs[i], cc.ys[j]);
            }
        }
    }
    return std::nullopt;
}

ConvexCheck convex_bound_check(ConvexCase const& cc)
{
    if (auto why = violated_hypothesis(cc))
    {
        throw RejectedInputError("convex case rejected: " + *why);
    }
    ConvexCheck check;
    std::size_t best = 0;
    double lhs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cc.xs.size(); ++i)
    {
        double const v = cc.weight.z_xx(cc.xs[i], cc.b);
        if (v < lhs)
        {
            lhs = v;
            best = i;
        }
    }
    double const dx = 2.0 * (2.0 * cc.c / (cc.grid - 1));
    auto top = [&cc](double x) { return cc.weight.z_xx(x, cc.b); };
    auto const refined = boost::math::tools::brent_find_minima(
        top, std::max(-cc.c, cc.xs[best] - dx), std::min(cc.c, cc.xs[best] + dx), kBrentBits);
    check.x_at = cc.xs[best];
    if (refined.second < lhs)
    {
        lhs = refined.second;
        check.x_at = refined.first;
    }
    check.lhs = lhs;
    check.rhs = (cc.M - cc.m) * cc.b * cc.b / (cc.c * cc.c);
    check.pass = check.lhs <= check.rhs + 1e-9;
    return check;
}

double proof_box_height(double a, double c)
{
    return 3.0 * c * c / a;
}

std::vector<ConvexCase> generate_convex_cases(std::uint64_t seed, int count, double c, double b,
                                              GeneratorStats* stats)
{
    if (count < 1)
    {
        throw ConfigurationError("count must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    double const two_pi = 2.0 * std::numbers::pi;

    std::vector<ConvexCase> out;
    GeneratorStats local;
    long const max_attempts = 100L * count;
    while (static_cast<int>(out.size()) < count)
    {
        if (local.attempts >= max_attempts)
        {
            throw GeneratorExhaustedError(fmt::format(
                "accepted {} of {} candidates (rejection rate above 99%); try a flatter box (smaller b/c)",
                local.accepted, local.attempts));
        }
        ++local.attempts;
        TrigWeight w;
        w.w0 = uniform(0.5, 2.0);
        int const n_terms = 1 + static_cast<int>(unit(rng) * 3.0);
        for (int k = 0; k < n_terms; ++k)
        {
            TrigTerm t;
            t.amplitude = uniform(-1.0, 1.0) * 0.9 * w.w0 / n_terms;
            t.kx = unit(rng) < 0.25 ? 0.0 : uniform(0.2, 1.5) / c;
            t.phase_x = uniform(0.0, two_pi);
            t.ku = uniform(0.0, 2.0) / b;
            t.phase_u = uniform(0.0, two_pi);
            w.terms.push_back(t);
        }
        auto cc = make_convex_case(w, c, b);
        if (!violated_hypothesis(cc))
        {
            ++local.accepted;
            out.push_back(std::move(cc));
        }
    }
    if (stats)
    {
        *stats = local;
    }
    return out;
}

nlohmann::ordered_json archive_case(ConvexCase const& cc, ConvexCheck const* check)
{
    nlohmann::ordered_json j;
    j["c"] = cc.c;
    j["b"] = cc.b;
    j["m"] = cc.m;
    j["M"] = cc.M;
    j["w0"] = cc.weight.w0;
    auto terms = nlohmann::ordered_json::array();
    for (auto const& t : cc.weight.terms)
    {
        terms.push_back({{"amplitude", t.amplitude},
                         {"kx", t.kx},
                         {"phase_x", t.phase_x},
                         {"ku", t.ku},
                         {"phase_u", t.phase_u}});
    }
    j["terms"] = terms;
    if (check)
    {
        j["lhs"] = check->lhs;
        j["rhs"] = check->rhs;
        j["x_at"] = check->x_at;
        j["pass"] = check->pass;
    }
    j["xs"] = cc.xs;
    j["ys"] = cc.ys;
    auto field = [](Eigen::MatrixXd const& m) {
        auto rows = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            std::vector<double> r(m.cols());
            for (Eigen::Index k = 0; k < m.cols(); ++k)
            {
                r[k] = m(i, k);
            }
            rows.push_back(r);
        }
        return rows;
    };
    j["z"] = field(cc.z);
    j["z_xx"] = field(cc.z_xx);
    j["z_xy"] = field(cc.z_xy);
    j["z_yy"] = field(cc.z_yy);
    return j;
}

//---------------------------------------------------------------------------//

RuledSurface make_cylinder(double radius)
{
    if (!(radius > 0.0))
    {
        throw DomainError("cylinder radius must be positive");
    }
    RuledSurface s;
    s.name = "cylinder";
    s.base = [radius](double t) { return Eigen::Vector3d(radius * std::cos(t), radius * std::sin(t), 0.0); };
    s.base_d1 = [radius](double t) { return Eigen::Vector3d(-radius * std::sin(t), radius * std::cos(t), 0.0); };
    s.base_d2 = [radius](double t) { return Eigen::Vector3d(-radius * std::cos(t), -radius * std::sin(t), 0.0); };
    s.dir = [](double) { return Eigen::Vector3d(0.0, 0.0, 1.0); };
    s.dir_d1 = [](double) { return Eigen::Vector3d::Zero().eval(); };
    s.dir_d2 = s.dir_d1;
    return s;
}

RuledSurface make_cone(double half_angle)
{
    if (!(half_angle > 0.0 && half_angle < 0.5 * std::numbers::pi))
    {
        throw DomainError("cone half-angle must lie in (0, pi/2)");
    }
    double const sa = std::sin(half_angle);
    double const ca = std::cos(half_angle);
    RuledSurface s;
    s.name = "cone";
    s.base = [](double) { return Eigen::Vector3d::Zero().eval(); };
    s.base_d1 = s.base;
    s.base_d2 = s.base;
    s.dir = [sa, ca](double t) { return Eigen::Vector3d(sa * std::cos(t), sa * std::sin(t), ca); };
    s.dir_d1 = [sa](double t) { return Eigen::Vector3d(-sa * std::sin(t), sa * std::cos(t), 0.0); };
    s.dir_d2 = [sa](double t) { return Eigen::Vector3d(-sa * std::cos(t), -sa * std::sin(t), 0.0); };
    return s;
}

RuledSurface make_helix_tangent_developable(double radius, double pitch)
{
    if (!(radius > 0.0) || !(pitch > 0.0))
    {
        throw DomainError("helix radius and pitch must be positive");
    }
    double const speed = std::hypot(radius, pitch);
    double const r = radius;
    double const h = pitch;
    auto gamma = [=](double t) {
        return Eigen::Vector3d(r * std::cos(t / speed), r * std::sin(t / speed), h * t / speed);
    };
    auto gamma1 = [=](double t) {
        return Eigen::Vector3d(-r / speed * std::sin(t / speed), r / speed * std::cos(t / speed), h / speed);
    };
    auto gamma2 = [=](double t) {
        double const k = r / (speed * speed);
        return Eigen::Vector3d(-k * std::cos(t / speed), -k * std::sin(t / speed), 0.0);
    };
    auto gamma3 = [=](double t) {
        double const k = r / (speed * speed * speed);
        return Eigen::Vector3d(k * std::sin(t / speed), -k * std::cos(t / speed), 0.0);
    };
    RuledSurface s;
    s.name = "helix_tangent_developable";
    s.base = gamma;
    s.base_d1 = gamma1;
    s.base_d2 = gamma2;
    s.dir = gamma1;
    s.dir_d1 = gamma2;
    s.dir_d2 = gamma3;
    return s;
}

RuledSample sample_ruling(RuledSurface const& surf, double t0, double v0, double v1, int count, double fd_step)
{
    if (count < 3 || !(v1 > v0))
    {
        throw ConfigurationError("ruling sample needs v1 > v0 and at least 3 samples");
    }
    RuledSample out;
    out.surface = surf.name;
    out.t0 = t0;
    double const h = fd_step;
    Eigen::Vector3d reference = Eigen::Vector3d::Zero();
    for (int i = 0; i < count; ++i)
    {
        double const v = v0 + (v1 - v0) * i / (count - 1);
        Eigen::Vector3d xt, xv, xtt, xtv;
        if (h > 0.0)
        {
            auto P = [&surf](double t, double vv) { return surf.point(t, vv); };
            xt = (P(t0 + h, v) - P(t0 - h, v)) / (2 * h);
            xv = (P(t0, v + h) - P(t0, v - h)) / (2 * h);
            xtt = (P(t0 + h, v) - 2 * P(t0, v) + P(t0 - h, v)) / (h * h);
            xtv = (P(t0 + h, v + h) - P(t0 + h, v - h) - P(t0 - h, v + h) + P(t0 - h, v - h)) / (4 * h * h);
        }
        else
        {
            xt = surf.base_d1(t0) + v * surf.dir_d1(t0);
            xv = surf.dir(t0);
            xtt = surf.base_d2(t0) + v * surf.dir_d2(t0);
            xtv = surf.dir_d1(t0);
        }
        // The tangent plane is constant along a ruling; orient every normal
        // like the first so that a sign change of k stays visible.
        Eigen::Vector3d normal = xt.cross(xv).normalized();
        if (i == 0)
        {
            reference = normal;
        }
        else if (normal.dot(reference) < 0.0)
        {
            normal = -normal;
        }
        double const e = xt.dot(xt);
        double const f = xt.dot(xv);
        double const g = xv.dot(xv);
        double const l = xtt.dot(normal);
        double const m = xtv.dot(normal);
        double const det = e * g - f * f;
        double const gauss = -m * m / det;
        double const mean = (g * l - 2.0 * f * m) / (2.0 * det);
        out.s.push_back((v - v0) * surf.dir(t0).norm());
        out.k.push_back(2.0 * mean);
        out.max_abs_gauss = std::max(out.max_abs_gauss, std::abs(gauss));
    }
    return out;
}

RulingFit ruling_curvature_fit(RuledSample const& sample)
{
    if (sample.k.size() < 3 || sample.k.size() != sample.s.size())
    {
        throw ConfigurationError("ruling fit needs at least 3 paired samples");
    }
    double const kmax = std::abs(*std::max_element(sample.k.begin(), sample.k.end(),
                                                   [](double p, double q) { return std::abs(p) < std::abs(q); }));
    bool const positive = sample.k.front() > 0.0;
    std::vector<double> inv;
    for (double k : sample.k)
    {
        if (!(std::abs(k) > 1e-12 * kmax) || (k > 0.0) != positive)
        {
            throw RejectedInputError("principal curvature vanishes or changes sign along the generator");
        }
        inv.push_back(1.0 / k);
    }
    auto const line = numerics::fit_line(sample.s, inv);
    RulingFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.A = 1.0 / line.slope;
    fit.B = line.intercept / line.slope;
    fit.max_residual = line.max_residual;
    return fit;
}

//---------------------------------------------------------------------------//

SagittaResult sagitta(double a, double c)
{
    if (!(a > 0.0))
    {
        throw DomainError("a must be positive");
    }
    if (c < 0.0 || c >= 0.5 * a)
    {
        throw DomainError(fmt::format("half-chord c = {} must lie in [0, a/2)", c));
    }
    SagittaResult r;
    r.value = c * c / (0.5 * a + std::sqrt((0.5 * a - c) * (0.5 * a + c)));
    r.above_lower = r.value >= c * c / a;
    r.below_upper = r.value <= 2.0 * c * c / a;
    return r;
}

//---------------------------------------------------------------------------//

std::vector<Chord> affine_segment_detect(DiscMap const& map, double tol, AffineScanOptions const& opts)
{
    if (opts.n_boundary < 3 || opts.n_chord < 3)
    {
        throw ConfigurationError("affine scan needs at least 3 boundary and 3 chord samples");
    }
    std::vector<Eigen::Vector2d> bnd;
    std::vector<Eigen::Vector3d> img;
    for (int i = 0; i < opts.n_boundary; ++i)
    {
        double const th = 2.0 * std::numbers::pi * i / opts.n_boundary;
        Eigen::Vector2d const p = map.center + map.radius * Eigen::Vector2d(std::cos(th), std::sin(th));
        bnd.push_back(p);
        img.push_back(map.phi(p.x(), p.y()));
    }
    std::vector<Chord> out;
    for (int i = 0; i < opts.n_boundary; ++i)
    {
        for (int j = i + 1; j < opts.n_boundary; ++j)
        {
            Chord ch;
            ch.i = i;
            ch.j = j;
            ch.p = bnd[i];
            ch.q = bnd[j];
            ch.length = (ch.q - ch.p).norm();
            for (int k = 1; k + 1 < opts.n_chord; ++k)
            {
                double const t = static_cast<double>(k) / (opts.n_chord - 1);
                Eigen::Vector2d const x = (1.0 - t) * ch.p + t * ch.q;
                Eigen::Vector3d const affine = (1.0 - t) * img[i] + t * img[j];
                ch.deviation = std::max(ch.deviation, (map.phi(x.x(), x.y()) - affine).norm());
            }
            if (ch.deviation < tol * ch.length)
            {
                out.push_back(ch);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](Chord const& l, Chord const& r) { return l.length < r.length; });
    return out;
}

DiscMap revolution_disc_map(ProfileCurve const& curve, double radius)
{
    if (!(radius > 0.0) || radius > curve.rho_max)
    {
        throw DomainError(fmt::format("disc radius {} must lie in (0, rho_max = {}]", radius, curve.rho_max));
    }
    DiscMap map;
    map.radius = radius;
    map.phi = [curve](double x, double y) {
        double const rho = std::min(std::hypot(x, y), curve.rho_max);
        double const theta = std::atan2(y, x);
        double const r = curve.profile.eval(rho, 0);
        return Eigen::Vector3d(r * std::cos(theta), r * std::sin(theta), curve.z_at(rho));
    };
    return map;
}

}  // namespace pogorelov
