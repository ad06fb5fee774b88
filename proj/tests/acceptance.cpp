// Runs every acceptance criterion at exact equality; one line per criterion.
#include "fdisk_suite/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

int main(int argc, char** argv) {
    std::uint64_t seed = 7;
    std::string report_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
        else if (a == "--json-out" && i + 1 < argc) report_path = argv[++i];
    }
    std::vector<fdisk::suite::CriterionResult> results;
    int failed = 0;
    for (const auto& c : fdisk::suite::criteria()) {
        auto r = fdisk::suite::run_criterion(c, seed);
        std::printf("[%s] criterion %2d: %s (%ld checks, %.1f s)\n", r.check.pass ? "PASS" : "FAIL", r.id,
                    r.title.c_str(), r.check.checked, r.seconds);
        if (!r.check.pass) {
            ++failed;
            std::printf("       %s\n", r.check.counterexamples.dump().substr(0, 2000).c_str());
        }
        std::fflush(stdout);
        results.push_back(std::move(r));
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << fdisk::suite::acceptance_report(results, seed).dump(2) << "\n";
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
