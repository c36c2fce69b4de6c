#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "homsys/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"homsys acceptance suite"};
    std::vector<int> ids;
    homsys::AcceptanceOptions opt;
    std::string out;
    app.add_option("--criterion", ids, "criterion ids to run (default: all)")->check(CLI::Range(1, homsys::kCriteria));
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "directory for criterion CSVs");
    CLI11_PARSE(app, argc, argv);
    opt.out_dir = out;
    if (ids.empty())
        for (int k = 1; k <= homsys::kCriteria; ++k) ids.push_back(k);
    int failed = 0;
    for (int id : ids) {
        const auto r = homsys::run_criterion(id, opt);
        std::fputs(homsys::format(r).c_str(), stdout);
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", ids.size(), failed);
    return failed ? 1 : 0;
}
