#pragma once

#include <string>
#include <vector>

#include "lab/harness/config.hpp"

namespace lab::harness {

struct RunOptions {
    std::string out_dir;   // already created by the caller
    unsigned threads = 1;
    bool plots = true;
};

// Runs the configured experiment and returns the names (relative to out_dir)
// of every file written. Numerical failures propagate as exceptions.
std::vector<std::string> run_experiment(const HarnessConfig& config,
                                        const RunOptions& opts);

}  // namespace lab::harness
