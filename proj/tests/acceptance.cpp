// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion.

#include <cstdio>

#include "strata/verification.hpp"

int main() {
    const auto results = strata::verify_all(1);
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s  [%2d] %-38s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s: %zu criteria\n", all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                results.size());
    return all ? 0 : 1;
}
