#include "pogorelov/report_io.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace pogorelov
{

std::string format_number(double x)
{
    if (std::isnan(x))
    {
        return "NaN";
    }
    if (std::isinf(x))
    {
        return x > 0 ? "Infinity" : "-Infinity";
    }
    return fmt::format("{:.17g}", x);
}

namespace
{
std::string json_number(double x)
{
    // JSON has no NaN/Infinity literals; emit them as strings.
    if (!std::isfinite(x))
    {
        return "\"" + format_number(x) + "\"";
    }
    return format_number(x);
}
}  // namespace

void dump_json(nlohmann::ordered_json const& j, std::ostream& os, int indent)
{
    std::string const pad(indent + 2, ' ');
    std::string const close(indent, ' ');
    switch (j.type())
    {
        case nlohmann::ordered_json::value_t::object: {
            if (j.empty())
            {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                os << (first ? "" : ",\n") << pad << nlohmann::ordered_json(it.key()).dump() << ": ";
                dump_json(it.value(), os, indent + 2);
                first = false;
            }
            os << "\n" << close << "}";
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (j.empty())
            {
                os << "[]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (auto const& v : j)
            {
                os << (first ? "" : ",\n") << pad;
                dump_json(v, os, indent + 2);
                first = false;
            }
            os << "\n" << close << "]";
            return;
        }
        case nlohmann::ordered_json::value_t::number_float:
            os << json_number(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

std::string dump_json(nlohmann::ordered_json const& j)
{
    std::ostringstream os;
    dump_json(j, os);
    os << "\n";
    return os.str();
}

}  // namespace pogorelov
