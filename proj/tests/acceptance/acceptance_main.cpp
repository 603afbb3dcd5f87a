#include <cstdio>

#include "ewgame/acceptance.hpp"

int main() {
    ewgame::verify::AcceptanceOptions opts;
    int passed = 0, total = 0;
    ewgame::verify::run_acceptance(opts, [&](const ewgame::verify::CriterionResult& r) {
        std::printf("%s\n", ewgame::verify::format_result(r).c_str());
        std::fflush(stdout);
        ++total;
        passed += r.pass;
    });
    std::printf("%d/%d acceptance criteria passed\n", passed, total);
    return passed == total ? 0 : 1;
}
