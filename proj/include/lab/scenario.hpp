#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lab/vec.hpp"

namespace lab {

struct Component {
    double weight = 1.0;
    Vec rendering;  // v_k = g(k)
};

// Named statistic phi_j: one discrete label per mixture component.
struct Attribute {
    std::string name;
    std::vector<int> labels;

    int n_labels() const;
    double prior_entropy(const std::vector<Component>& comps) const;
};

// The latent abstraction X, its prior, the rendering V = g(X) and the label
// statistics. Either a finite mixture (K components, distinct renderings) or
// a Gaussian latent where V itself is N(mu0, var0 I).
struct LatentScenario {
    enum class Kind { finite_mixture, gaussian };

    Kind kind = Kind::finite_mixture;
    std::size_t dim = 1;
    std::vector<Component> components;  // finite_mixture
    std::vector<Attribute> attributes;
    Vec mu0;                            // gaussian
    double var0 = 1.0;

    std::size_t n_components() const { return components.size(); }
    const Attribute& attribute(const std::string& name) const;
    int attribute_index(const std::string& name) const;  // -1 if absent

    // Component indices consistent with phi_j = label.
    std::vector<std::size_t> label_support(std::size_t attr, int label) const;

    void validate() const;  // throws std::invalid_argument with the failing field
};

// Reference scenarios used across tests and the CLI.
namespace scenarios {

// K=2, renderings +/- gap in 1-D, equal weights, one "sign" attribute.
LatentScenario binary_symmetric(double gap = 1.0);

// K=3 generic asymmetric 1-D mixture.
LatentScenario three_component();

// K=4 in 2-D: attribute A shifts both coordinates by a large offset,
// attribute B perturbs coordinate 0 by a small one. A is the global
// (early-emerging) factor, B the local (late) one.
LatentScenario two_attribute_hierarchy();

// Gaussian latent V ~ N(0, 1) in 1-D.
LatentScenario standard_gaussian();

std::vector<std::string> names();
LatentScenario by_name(const std::string& name);

}  // namespace scenarios

}  // namespace lab
