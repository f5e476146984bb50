#include <cstdio>

#include <maxface/verify.hpp>

int main() {
    bool all = true;
    for (int i = 1; i <= int(maxface::verify::runners().size()); ++i) {
        maxface::verify::CriterionResult r = maxface::verify::run_one(i);
        std::printf("%s criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
    return all ? 0 : 1;
}
