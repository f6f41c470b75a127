#include "pogorelov/assembly.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/report_io.hpp"

namespace pogorelov
{

double disc_radius(int n)
{
    double const m = n + 1.0;
    return 1.0 / (2.0 * m * m);
}

LayoutCheck check_layout(DiscLayout const& layout)
{
    LayoutCheck check;
    check.min_gap = std::numeric_limits<double>::infinity();
    auto const& e = layout.entries;
    for (auto const& d : e)
    {
        if (std::hypot(d.cx, d.cy) <= d.radius)
        {
            ++check.contains_origin;
        }
    }
    // entries are ordered by decreasing center x
    for (std::size_t i = 1; i < e.size(); ++i)
    {
        double const gap = (e[i - 1].cx - e[i - 1].radius) - (e[i].cx + e[i].radius);
        check.min_gap = std::min(check.min_gap, gap);
        if (!(gap > 0.0))
        {
            ++check.overlaps;
        }
    }
    return check;
}

DiscLayout build_layout(int n_max)
{
    if (n_max < 1)
    {
        throw DomainError(fmt::format("n_max = {} must be at least 1", n_max));
    }
    DiscLayout layout;
    layout.n_max = n_max;
    layout.entries.reserve(n_max);
    for (int n = 1; n <= n_max; ++n)
    {
        layout.entries.push_back({n, 1.0 / n, 0.0, disc_radius(n)});
    }
    auto const check = check_layout(layout);
    if (check.overlaps != 0 || check.contains_origin != 0)
    {
        throw InternalConsistencyError(fmt::format("layout has {} overlaps and {} discs containing the origin",
                                                   check.overlaps, check.contains_origin));
    }
    return layout;
}

std::array<double, 3> radial_weight(RadialProfile const& p, double rho)
{
    // N = f^2 - rho^2 = d (2 rho + d) with d = f - rho
    double const d = p.deviation(rho, 0);
    double const d1 = p.deviation(rho, 1);
    double const d2 = p.deviation(rho, 2);
    double const n0 = d * (2.0 * rho + d);
    double const n1 = 2.0 * d + 2.0 * rho * d1 + 2.0 * d * d1;
    double const n2 = 4.0 * d1 + 2.0 * rho * d2 + 2.0 * d1 * d1 + 2.0 * d * d2;
    double const r2 = rho * rho;
    double const r4 = r2 * r2;
    double const r5 = r4 * rho;
    double const r6 = r4 * r2;
    return {n0 / r4, n1 / r4 - 4.0 * n0 / r5, n2 / r4 - 8.0 * n1 / r5 + 20.0 * n0 / r6};
}

MetricField::MetricField(DiscLayout layout, WorkingDomain domain)
    : layout_(std::move(layout)), domain_(domain)
{
    profiles_.reserve(layout_.entries.size());
    for (auto const& d : layout_.entries)
    {
        profiles_.push_back(make_pogorelov_profile(d.radius));
    }
}

std::optional<std::size_t> MetricField::locate(double x, double y) const
{
    if (!(x > 0.0) || layout_.entries.empty())
    {
        return std::nullopt;
    }
    double const guess = std::round(1.0 / x);
    long const n_max = static_cast<long>(layout_.entries.size());
    long const center = guess > static_cast<double>(n_max) + 2.0 ? n_max + 3 : static_cast<long>(guess);
    for (long n = center - 2; n <= center + 2; ++n)
    {
        if (n < 1 || n > n_max)
        {
            continue;
        }
        auto const& d = layout_.entries[n - 1];
        double const dx = x - d.cx;
        double const dy = y - d.cy;
        if (dx * dx + dy * dy < d.radius * d.radius)
        {
            return static_cast<std::size_t>(n - 1);
        }
    }
    return std::nullopt;
}

MetricJet MetricField::disc_jet(std::size_t index, double x, double y) const
{
    MetricJet jet;
    auto const& d = layout_.entries.at(index);
    auto const& p = profiles_[index];
    double const X = x - d.cx;
    double const Y = y - d.cy;
    double const rho = std::hypot(X, Y);
    if (!(rho > 0.5 * d.radius) || !(rho < d.radius))
    {
        return jet;
    }
    auto const [w, w1, w2] = radial_weight(p, rho);
    Eigen::Matrix2d m;
    m << Y * Y, -X * Y, -X * Y, X * X;
    std::array<Eigen::Matrix2d, 2> dm;
    dm[0] << 0.0, -Y, -Y, 2.0 * X;
    dm[1] << 2.0 * Y, -X, -X, 0.0;
    std::array<Eigen::Matrix2d, 3> ddm;
    ddm[0] << 0.0, 0.0, 0.0, 2.0;
    ddm[1] << 0.0, -1.0, -1.0, 0.0;
    ddm[2] << 2.0, 0.0, 0.0, 0.0;
    std::array<double, 2> const xk{X, Y};

    jet.deviation = w * m;
    jet.value = Eigen::Matrix2d::Identity() + jet.deviation;
    for (int k = 0; k < 2; ++k)
    {
        jet.d1[k] = (w1 * xk[k] / rho) * m + w * dm[k];
    }
    int idx = 0;
    for (int k = 0; k < 2; ++k)
    {
        for (int l = k; l < 2; ++l, ++idx)
        {
            double const delta = k == l ? 1.0 : 0.0;
            double const radial = w2 * xk[k] * xk[l] / (rho * rho)
                                  + w1 * (delta / rho - xk[k] * xk[l] / (rho * rho * rho));
            jet.d2[idx] = radial * m + (w1 / rho) * (xk[k] * dm[l] + xk[l] * dm[k]) + w * ddm[idx];
        }
    }
    return jet;
}

MetricJet MetricField::jet(double x, double y) const
{
    if (auto idx = locate(x, y))
    {
        return disc_jet(*idx, x, y);
    }
    return MetricJet{};
}

Eigen::Matrix2d MetricField::eval(double x, double y) const
{
    return jet(x, y).value;
}

Eigen::Matrix2d eval_metric(MetricField const& field, double x, double y)
{
    return field.eval(x, y);
}

std::vector<Eigen::Matrix2d> metric_derivatives(MetricField const& field, double x, double y, int order)
{
    auto const j = field.jet(x, y);
    if (order == 1)
    {
        return {j.d1.begin(), j.d1.end()};
    }
    if (order == 2)
    {
        return {j.d2.begin(), j.d2.end()};
    }
    throw DomainError(fmt::format("derivative order {} not in {{1, 2}}", order));
}

Eigen::Matrix2d polar_pullback(RadialProfile const& p, double rho, double theta)
{
    // (x, y) = rho (cos, sin): d rho = c dx + s dy, d theta = (-s dx + c dy)/rho
    double const c = std::cos(theta);
    double const s = std::sin(theta);
    Eigen::Matrix2d inv_jac;
    inv_jac << c, s, -s / rho, c / rho;
    Eigen::Matrix2d polar = Eigen::Matrix2d::Zero();
    double const f = p.eval(rho, 0);
    polar(0, 0) = 1.0;
    polar(1, 1) = f * f;
    return inv_jac.transpose() * polar * inv_jac;
}

void write_layout_json(DiscLayout const& layout, std::ostream& os)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto const& d : layout.entries)
    {
        arr.push_back({{"n", d.n}, {"cx", d.cx}, {"cy", d.cy}, {"r", d.radius}});
    }
    dump_json(arr, os);
    os << "\n";
}

void write_metric_grid_csv(MetricField const& field, int nx, int ny, std::ostream& os)
{
    if (nx < 2 || ny < 2)
    {
        throw ConfigurationError("metric grid needs at least 2 points per axis");
    }
    auto const& dom = field.domain();
    os << "x,y,h11,h12,h22\n";
    for (int j = 0; j < ny; ++j)
    {
        double const y = dom.y_lo + (dom.y_hi - dom.y_lo) * j / (ny - 1);
        for (int i = 0; i < nx; ++i)
        {
            double const x = dom.x_lo + (dom.x_hi - dom.x_lo) * i / (nx - 1);
            auto const h = field.eval(x, y);
            os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", x, y, h(0, 0), h(0, 1), h(1, 1));
        }
    }
}

}  // namespace pogorelov
