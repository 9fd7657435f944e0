// Acceptance suite: runs every selftest group and prints one pass/fail line
// per criterion with its residual details.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "mpk/selftest.hpp"

int main(int argc, char** argv) {
    uint64_t seed = 20240817ull;
    for (int i = 1; i < argc - 1; ++i)
        if (std::strcmp(argv[i], "--seed") == 0) seed = std::strtoull(argv[i + 1], nullptr, 10);

    int failures = 0;
    double total = 0.0;
    for (const auto& r : mpk::selftest::run_all(seed)) {
        std::printf("[%s] %-20s %6.2f s (budget %g s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.runtime_sec, r.budget_sec);
        for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
        if (!r.pass) ++failures;
        total += r.runtime_sec;
    }
    std::printf("%d/%zu criteria passed, total %.1f s\n",
                static_cast<int>(mpk::selftest::criterion_names().size()) - failures,
                mpk::selftest::criterion_names().size(), total);
    return failures == 0 ? 0 : 1;
}
