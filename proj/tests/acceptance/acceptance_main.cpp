// Runs the acceptance suite and prints one line per criterion.
#include <cstring>
#include <iostream>

#include "pogorelov/verification.hpp"

int main(int argc, char** argv)
{
    pogorelov::VerifyOptions opts;
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--quick") == 0)
        {
            opts.quick = true;
        }
    }
    auto const report = pogorelov::run_acceptance(opts);
    std::cout << report.to_text();
    return report.all_pass() ? 0 : 1;
}
