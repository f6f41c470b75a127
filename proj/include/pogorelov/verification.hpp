#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace pogorelov
{

struct CheckResult
{
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail{};
    nlohmann::ordered_json data{};
};

struct VerifyOptions
{
    //! Reduced sample counts and grids; every tolerance is unchanged.
    bool quick = false;
};

struct VerifyReport
{
    std::vector<CheckResult> checks;
    bool quick = false;

    bool all_pass() const;
    //! One line per check: "[PASS] 01 name: detail".
    std::string to_text() const;
    nlohmann::ordered_json to_json() const;
};

//! Checks 1-12 of the acceptance suite.
VerifyReport run_quantitative_checks(VerifyOptions const& opts);

//! Checks 1-12, then check 13: a second full run must serialize to the same
//! bytes as the first.
VerifyReport run_acceptance(VerifyOptions const& opts);

}  // namespace pogorelov
