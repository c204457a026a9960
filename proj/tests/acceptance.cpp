// Standalone acceptance runner: one line per criterion, nonzero exit if any
// criterion fails. Usage: acceptance [filter-substring]
#include <cstdio>
#include <string>

#include "sectomo/selftest.hpp"

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const auto results = sectomo::run_selftest("", 20240817, filter);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] %-26s %s\n", r.pass ? "pass" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failed;
    }
    if (results.empty()) {
        std::printf("no criteria match filter '%s'\n", filter.c_str());
        return 1;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}
