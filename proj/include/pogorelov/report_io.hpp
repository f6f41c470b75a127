#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

namespace pogorelov
{

//! 17 significant digits, the serialization used for every numeric output.
std::string format_number(double x);

//! Deterministic JSON writer (object keys in insertion order of the
//! ordered_json, floats via format_number, two-space indent).
void dump_json(nlohmann::ordered_json const& j, std::ostream& os, int indent = 0);
std::string dump_json(nlohmann::ordered_json const& j);

}  // namespace pogorelov
