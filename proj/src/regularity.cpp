#include "pogorelov/regularity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "pogorelov/errors.hpp"
#include "pogorelov/numerics.hpp"

namespace pogorelov
{

namespace
{
double max_entry(Eigen::Matrix2d const& m)
{
    return m.cwiseAbs().maxCoeff();
}

struct GridNorms
{
    std::array<double, kNumNorms> norms{};
    double lip_argmax = 0;
};

GridNorms scan_disc(MetricField const& field, std::size_t index, int grid_n)
{
    auto const& d = field.layout().entries[index];
    double const a = d.radius;
    int const n_rad = grid_n + 1;
    int const n_ang = grid_n;
    std::vector<MetricJet> jets(static_cast<std::size_t>(n_rad) * n_ang);
    std::vector<Eigen::Vector2d> pos(jets.size());
    GridNorms out;
    for (int i = 0; i < n_rad; ++i)
    {
        double const rho = 0.5 * a + 0.5 * a * i / grid_n;
        for (int j = 0; j < n_ang; ++j)
        {
            double const theta = 2.0 * std::numbers::pi * j / n_ang;
            std::size_t const k = static_cast<std::size_t>(i) * n_ang + j;
            pos[k] = {rho * std::cos(theta), rho * std::sin(theta)};
            jets[k] = field.disc_jet(index, d.cx + pos[k].x(), d.cy + pos[k].y());
            auto const& jt = jets[k];
            out.norms[kSupDev] = std::max(out.norms[kSupDev], max_entry(jt.deviation));
            for (auto const& m : jt.d1)
            {
                out.norms[kSupD1] = std::max(out.norms[kSupD1], max_entry(m));
            }
            for (auto const& m : jt.d2)
            {
                out.norms[kSupD2] = std::max(out.norms[kSupD2], max_entry(m));
            }
        }
    }
    auto lip_pair = [&](std::size_t p, std::size_t q) {
        double diff = 0.0;
        for (int c = 0; c < 3; ++c)
        {
            diff = std::max(diff, max_entry(jets[p].d2[c] - jets[q].d2[c]));
        }
        double const ratio = diff / (pos[p] - pos[q]).norm();
        if (ratio > out.norms[kLipD2])
        {
            out.norms[kLipD2] = ratio;
            out.lip_argmax = 0.5 * (pos[p].norm() + pos[q].norm()) / a;
        }
    };
    for (int i = 0; i < n_rad; ++i)
    {
        for (int j = 0; j < n_ang; ++j)
        {
            std::size_t const k = static_cast<std::size_t>(i) * n_ang + j;
            if (i + 1 < n_rad)
            {
                lip_pair(k, k + n_ang);
            }
            lip_pair(k, static_cast<std::size_t>(i) * n_ang + (j + 1) % n_ang);
        }
    }
    return out;
}
}  // namespace

NormRow estimate_norms(MetricField const& field, int n, int grid_n)
{
    if (grid_n < 64)
    {
        throw ConfigurationError(fmt::format("grid_n = {} below the minimum of 64", grid_n));
    }
    auto const& entries = field.layout().entries;
    if (n < 1 || n > static_cast<int>(entries.size()))
    {
        throw DomainError(fmt::format("disc index {} outside the layout 1..{}", n, entries.size()));
    }
    auto const coarse = scan_disc(field, n - 1, grid_n);
    auto const fine = scan_disc(field, n - 1, 2 * grid_n);
    NormRow row;
    row.n = n;
    row.a = entries[n - 1].radius;
    for (int k = 0; k < kNumNorms; ++k)
    {
        row.norms[k] = std::max(coarse.norms[k], fine.norms[k]);
        if (row.norms[k] > 0.0)
        {
            row.max_refinement_change = std::max(
                row.max_refinement_change, std::abs(fine.norms[k] - coarse.norms[k]) / row.norms[k]);
        }
    }
    row.lip_argmax = fine.norms[kLipD2] >= coarse.norms[kLipD2] ? fine.lip_argmax : coarse.lip_argmax;
    row.flagged = row.max_refinement_change > 0.2;
    return row;
}

NormReport build_norm_report(MetricField const& field, int n_first, int n_last, int grid_n)
{
    if (n_first < 1 || n_last < n_first)
    {
        throw DomainError(fmt::format("invalid disc range [{}, {}]", n_first, n_last));
    }
    NormReport report;
    report.grid_n = grid_n;
    for (int n = n_first; n <= n_last; ++n)
    {
        report.rows.push_back(estimate_norms(field, n, grid_n));
    }
    return report;
}

std::array<DecayFit, kNumNorms> decay_fit(NormReport const& report, int n_lo, int n_hi)
{
    std::array<DecayFit, kNumNorms> fits;
    for (int k = 0; k < kNumNorms; ++k)
    {
        auto& fit = fits[k];
        fit.name = kNormNames[k];
        fit.claimed = kClaimedExponents[k];
        std::vector<double> x;
        std::vector<double> y;
        bool vanished = false;
        int count = 0;
        for (auto const& row : report.rows)
        {
            if (row.n < n_lo || row.n > n_hi)
            {
                continue;
            }
            ++count;
            if (!(row.norms[k] > 0.0))
            {
                vanished = true;
                continue;
            }
            x.push_back(std::log(row.n + 1.0));
            y.push_back(std::log(row.norms[k]));
        }
        if (count < 5)
        {
            throw ConfigurationError(fmt::format("decay fit needs at least 5 values of n, got {}", count));
        }
        fit.n_points = static_cast<int>(x.size());
        if (vanished)
        {
            fit.slope = -std::numeric_limits<double>::infinity();
            fit.ci_lo = fit.ci_hi = fit.slope;
            continue;
        }
        auto const line = numerics::fit_line(x, y);
        fit.slope = line.slope;
        fit.intercept = line.intercept;
        fit.stderr_slope = line.slope_stderr;
        fit.max_residual = line.max_residual;
        double const t = numerics::student_t_quantile(0.05, fit.n_points - 2);
        fit.ci_lo = fit.slope - t * fit.stderr_slope;
        fit.ci_hi = fit.slope + t * fit.stderr_slope;
    }
    return fits;
}

TailTable cauchy_check(NormReport const& report, int n_max)
{
    TailTable table;
    std::vector<NormRow const*> rows;
    for (auto const& row : report.rows)
    {
        if (row.n <= n_max)
        {
            rows.push_back(&row);
        }
    }
    if (rows.empty() || rows.front()->n != 1 || static_cast<int>(rows.size()) != n_max)
    {
        throw ConfigurationError(fmt::format("report must cover n = 1..{} contiguously", n_max));
    }
    for (int m = 1; m <= n_max; ++m)
    {
        table.m.push_back(m);
    }
    for (int k = 0; k < kNumNorms; ++k)
    {
        // T_m = sum over n = m+1..n_max, accumulated from the small end.
        std::vector<double> tails(n_max, 0.0);
        double acc = 0.0;
        for (int m = n_max; m >= 1; --m)
        {
            tails[m - 1] = acc;
            acc += rows[m - 1]->norms[k];
        }
        table.monotone[k] = true;
        for (int i = 1; i < n_max; ++i)
        {
            if (tails[i] > tails[i - 1])
            {
                table.monotone[k] = false;
            }
        }
        for (int i = 0; i < n_max; ++i)
        {
            if (tails[i] < table.threshold)
            {
                table.below_threshold[k] = i + 1;
                break;
            }
        }
        table.tails[k] = std::move(tails);
    }
    return table;
}

void write_norm_csv(NormReport const& report, std::ostream& os)
{
    os << "n,a,sup_dev,sup_D1,sup_D2,lip_D2\n";
    for (auto const& r : report.rows)
    {
        os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.n, r.a, r.norms[kSupDev],
                          r.norms[kSupD1], r.norms[kSupD2], r.norms[kLipD2]);
    }
}

}  // namespace pogorelov
