#include "lab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lab {

int Attribute::n_labels() const {
    std::set<int> s(labels.begin(), labels.end());
    return static_cast<int>(s.size());
}

double Attribute::prior_entropy(const std::vector<Component>& comps) const {
    std::set<int> distinct(labels.begin(), labels.end());
    double h = 0.0;
    for (int l : distinct) {
        double p = 0.0;
        for (std::size_t k = 0; k < comps.size(); ++k)
            if (labels[k] == l) p += comps[k].weight;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

const Attribute& LatentScenario::attribute(const std::string& name) const {
    for (const auto& a : attributes)
        if (a.name == name) return a;
    throw std::invalid_argument("unknown attribute: " + name);
}

int LatentScenario::attribute_index(const std::string& name) const {
    for (std::size_t j = 0; j < attributes.size(); ++j)
        if (attributes[j].name == name) return static_cast<int>(j);
    return -1;
}

std::vector<std::size_t> LatentScenario::label_support(std::size_t attr, int label) const {
    const auto& a = attributes.at(attr);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < a.labels.size(); ++k)
        if (a.labels[k] == label) out.push_back(k);
    return out;
}

void LatentScenario::validate() const {
    if (dim == 0) throw std::invalid_argument("scenario: dim must be >= 1");
    if (kind == Kind::gaussian) {
        if (mu0.size() != dim) throw std::invalid_argument("scenario: mu0 has wrong dimension");
        if (!(var0 > 0.0)) throw std::invalid_argument("scenario: var0 must be positive");
        return;
    }
    if (components.empty()) throw std::invalid_argument("scenario: no components");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("scenario: weights must be positive");
        if (c.rendering.size() != dim)
            throw std::invalid_argument("scenario: rendering has wrong dimension");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("scenario: weights must sum to 1");
    for (std::size_t i = 0; i < components.size(); ++i)
        for (std::size_t j = i + 1; j < components.size(); ++j)
            if (dist2(components[i].rendering, components[j].rendering) == 0.0)
                throw std::invalid_argument("scenario: renderings must be pairwise distinct");
    for (const auto& a : attributes)
        if (a.labels.size() != components.size())
            throw std::invalid_argument("scenario: attribute '" + a.name +
                                        "' not total on components");
}

namespace scenarios {

LatentScenario binary_symmetric(double gap) {
    LatentScenario s;
    s.kind = LatentScenario::Kind::finite_mixture;
    s.dim = 1;
    s.components = {{0.5, {+gap}}, {0.5, {-gap}}};
    s.attributes = {{"sign", {0, 1}}};
    s.validate();
    return s;
}

LatentScenario three_component() {
    LatentScenario s;
    s.kind = LatentScenario::Kind::finite_mixture;
    s.dim = 1;
    s.components = {{0.5, {-1.0}}, {0.3, {0.4}}, {0.2, {1.5}}};
    s.attributes = {{"component", {0, 1, 2}}, {"is_positive", {0, 1, 1}}};
    s.validate();
    return s;
}

LatentScenario two_attribute_hierarchy() {
    LatentScenario s;
    s.kind = LatentScenario::Kind::finite_mixture;
    s.dim = 2;
    const double big = 2.0;   // attribute A offset, applied to both coordinates
    const double small = 0.5; // attribute B offset, coordinate 0 only
    s.components.clear();
    std::vector<int> la, lb;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double base = (a == 0) ? -big : big;
            double bump = (b == 0) ? 0.0 : small;
            s.components.push_back({0.25, {base + bump, base}});
            la.push_back(a);
            lb.push_back(b);
        }
    s.attributes = {{"global", la}, {"local", lb}};
    s.validate();
    return s;
}

LatentScenario standard_gaussian() {
    LatentScenario s;
    s.kind = LatentScenario::Kind::gaussian;
    s.dim = 1;
    s.mu0 = {0.0};
    s.var0 = 1.0;
    return s;
}

std::vector<std::string> names() {
    return {"binary-symmetric", "three-component", "two-attribute-hierarchy", "standard-gaussian"};
}

LatentScenario by_name(const std::string& name) {
    if (name == "binary-symmetric") return binary_symmetric();
    if (name == "three-component") return three_component();
    if (name == "two-attribute-hierarchy") return two_attribute_hierarchy();
    if (name == "standard-gaussian") return standard_gaussian();
    throw std::invalid_argument("unknown built-in scenario: " + name);
}

}  // namespace scenarios

}  // namespace lab
