#pragma once

#include <string>
#include <vector>

#include "nlvortex/run_config.hpp"

namespace nlv {

struct CheckResult {
    std::string name;
    bool pass = false;
    double metric = 0.0;     // measured value
    double tolerance = 0.0;  // pass when metric <= tolerance (unless detail says otherwise)
    std::string detail;
    double elapsed_s = 0.0;
};

// Oracle-equivalence and invariant checks used by the `validate` command.
// quick = true skips the slow end-to-end fringe propagation.
std::vector<CheckResult> run_validation_checks(const RunConfig& cfg, bool quick);

}  // namespace nlv
