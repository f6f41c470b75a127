#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pogorelov/assembly.hpp"

namespace pogorelov
{

enum NormIndex
{
    kSupDev = 0,  //!< ||h_n - delta||_inf
    kSupD1,       //!< ||D h_n||_inf
    kSupD2,       //!< ||D^2 h_n||_inf
    kLipD2,       //!< [D^2 h_n]_Lip
    kNumNorms
};

inline constexpr std::array<char const*, kNumNorms> kNormNames{"sup_dev", "sup_D1", "sup_D2", "lip_D2"};

//! Exponents k in the O((n+1)^-k) orders asserted for the four norms.
inline constexpr std::array<double, kNumNorms> kClaimedExponents{-20.0, -6.0, -4.0, -2.0};

struct NormRow
{
    int n = 0;
    double a = 0;
    std::array<double, kNumNorms> norms{};
    double lip_argmax = 0;  //!< local rho / a of the pair attaining the Lipschitz estimate
    double max_refinement_change = 0;  //!< relative change between grid_n and 2 grid_n
    bool flagged = false;              //!< refinement changed some norm by more than 20%
};

struct NormReport
{
    std::vector<NormRow> rows;
    int grid_n = 0;
};

//! Sup norms and the Lipschitz seminorm of D^2 h_n on a polar grid over disc
//! n, in Cartesian components with the max-abs-entry matrix norm. The grid
//! is doubled once and the larger value of each norm is kept.
NormRow estimate_norms(MetricField const& field, int n, int grid_n);

NormReport build_norm_report(MetricField const& field, int n_first, int n_last, int grid_n);

struct DecayFit
{
    std::string name;
    double slope = 0;      //!< -inf when a norm vanishes in range
    double intercept = 0;
    double stderr_slope = 0;
    double ci_lo = 0;      //!< 95% confidence interval of the slope
    double ci_hi = 0;
    double max_residual = 0;
    double claimed = 0;
    int n_points = 0;
};

//! Least-squares slope of log(norm) against log(n+1) over n in [n_lo, n_hi].
std::array<DecayFit, kNumNorms> decay_fit(NormReport const& report, int n_lo, int n_hi);

struct TailTable
{
    std::vector<int> m;  //!< tail starts: T_m = sum_{n > m} norm_n
    std::array<std::vector<double>, kNumNorms> tails;
    std::array<bool, kNumNorms> monotone{};  //!< nonincreasing in m
    std::array<std::optional<int>, kNumNorms> below_threshold;  //!< first m with T_m < threshold
    double threshold = 1e-9;
};

TailTable cauchy_check(NormReport const& report, int n_max);

void write_norm_csv(NormReport const& report, std::ostream& os);

}  // namespace pogorelov
