// One line per acceptance criterion. Exit status is 0 when every failing
// criterion is listed with --known-failures, so ctest stays green while the
// FAIL lines still show up in the log.
#include "kvol/acceptance.hpp"
#include "kvol/volume_engine.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <set>

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria 1-10"};
    std::vector<int> only, known;
    bool verbose = false;
    app.add_option("--only", only, "run these criteria only")->delimiter(',');
    app.add_option("--known-failures", known, "criteria expected to fail")->delimiter(',');
    app.add_flag("-v,--verbose", verbose, "print every sub-check");
    CLI11_PARSE(app, argc, argv);
    if (only.empty()) only = kvol::suite_criteria("all");

    kvol::EngineConfig cfg;
    cfg.use_cache = false; // measure from scratch
    kvol::VolumeEngine engine(cfg);

    std::set<int> expected(known.begin(), known.end());
    int unexpected = 0;
    for (int id : only) {
        auto r = kvol::run_criterion(id, engine);
        const char* tag = r.pass() ? "PASS" : (expected.count(id) ? "FAIL (known)" : "FAIL");
        std::printf("criterion %2d %-32s %s  %s  [%.1fs]\n", id, r.title.c_str(), tag, r.summary().c_str(),
                    r.seconds);
        if (verbose || !r.pass())
            for (const auto& c : r.checks)
                std::printf("    %s %s: %.3e (bound %.1e)\n", c.pass ? "ok  " : "FAIL", c.what.c_str(), c.measured,
                            c.bound);
        if (!r.pass() && !expected.count(id)) ++unexpected;
        if (r.pass() && expected.count(id)) std::printf("    note: criterion %d now passes, drop it from --known-failures\n", id);
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
