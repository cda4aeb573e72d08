#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lab/generative.hpp"
#include "lab/score_model.hpp"

namespace lab {

struct ForkConfig {
    std::vector<double> tau_list;  // fork times within the grid
    std::size_t k = 100;           // replicas per fork
    std::size_t n_seeds = 10;      // independent trunk paths
    SamplerConfig sampler;
};

struct ForkCell {
    std::size_t seed = 0;
    double tau = 0.0;
    std::size_t attr = 0;
    std::vector<std::size_t> histogram;  // counts per label value
    double entropy = 0.0;                // nats
};

struct ForkAggregate {
    double tau = 0.0;
    std::size_t attr = 0;
    double mean_entropy = 0.0;
    double stderr_entropy = 0.0;
};

struct ForkReport {
    std::vector<ForkCell> cells;
    std::vector<ForkAggregate> aggregates;  // one per (tau, attribute)
    std::size_t classifier_ties = 0;
};

// Empirical entropy -sum p log p of a count histogram, 0 log 0 = 0.
double entropy(const std::vector<std::size_t>& histogram);

// Exact Bayes terminal classifier: posterior argmax over components at time
// t, lowest index on ties.
std::size_t bayes_classifier(const Vec& y, double t, const ScoreModel& model,
                             bool* tie = nullptr);

// Fork protocol: per seed, integrate a trunk backward path with shared noise,
// spawn k replicas at each tau with independently derived streams, integrate
// each to T - epsilon, classify terminals exactly, and report per-attribute
// label entropies aggregated across seeds.
ForkReport run_forking(const ScoreModel& model, const ForkConfig& config,
                       const TimeGrid& grid, const RandomStream& stream,
                       unsigned threads = 1);

}  // namespace lab
