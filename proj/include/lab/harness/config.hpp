#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lab/generative.hpp"
#include "lab/scenario.hpp"
#include "lab/schedule.hpp"
#include "lab/time_grid.hpp"

namespace lab::harness {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

// One batch experiment, fully described by a JSON document.
struct HarnessConfig {
    std::string experiment;  // filter-bench | mi-curve | fork | bridge-check | joint-vs-bridge
    LatentScenario scenario;
    Schedule sched;
    double epsilon = 1e-3;
    std::size_t steps = 1000;
    GridSpacing spacing = GridSpacing::uniform;
    SamplerConfig sampler;

    std::size_t n_paths = 1000;      // MC paths for filters / MI
    std::size_t n_particles = 1000;  // filter-bench particle stage
    std::size_t n_seeds = 10;        // fork trunks
    std::size_t k = 100;             // fork replicas

    std::vector<double> tau_list;  // fork times (empty -> uniform default)
    std::string phi = "full";      // "full" or an attribute name
    std::string estimator = "linear";  // mi-curve: general | linear | score-gap

    std::uint64_t seed = 1;
    std::string out = "results";
};

struct ConfigParse {
    HarnessConfig config;
    std::vector<std::string> errors;  // exhaustive; empty means valid

    bool ok() const { return errors.empty(); }
};

// Parses and validates the JSON text; every schema or semantic violation is
// reported, not just the first.
ConfigParse parse_config(const std::string& json_text);

// Reads the file and parses it. Throws std::runtime_error if unreadable.
ConfigParse load_config(const std::string& path);

TimeGrid config_grid(const HarnessConfig& c);

}  // namespace lab::harness
