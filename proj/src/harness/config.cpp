#include "lab/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lab::harness {

using nlohmann::json;

namespace {

const std::set<std::string> kExperiments = {"filter-bench", "mi-curve", "fork",
                                            "bridge-check", "joint-vs-bridge"};

void parse_scenario(const json& j, HarnessConfig& c, std::vector<std::string>& errs) {
    if (j.contains("builtin")) {
        if (!j["builtin"].is_string()) {
            errs.push_back("scenario.builtin: must be a string");
            return;
        }
        try {
            c.scenario = scenarios::by_name(j["builtin"].get<std::string>());
        } catch (const std::exception& e) {
            errs.push_back(std::string("scenario.builtin: ") + e.what());
        }
        return;
    }
    LatentScenario sc;
    sc.kind = LatentScenario::Kind::finite_mixture;
    if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0)
        errs.push_back("scenario.dim: positive integer required");
    else
        sc.dim = j["dim"].get<std::size_t>();
    if (!j.contains("components") || !j["components"].is_array() || j["components"].empty()) {
        errs.push_back("scenario.components: non-empty array required");
    } else {
        for (const auto& cj : j["components"]) {
            Component comp;
            if (!cj.contains("weight") || !cj["weight"].is_number())
                errs.push_back("scenario.components[].weight: number required");
            else
                comp.weight = cj["weight"].get<double>();
            if (!cj.contains("rendering") || !cj["rendering"].is_array())
                errs.push_back("scenario.components[].rendering: array required");
            else
                for (const auto& x : cj["rendering"]) comp.rendering.push_back(x.get<double>());
            sc.components.push_back(comp);
        }
    }
    if (j.contains("attributes")) {
        if (!j["attributes"].is_array()) {
            errs.push_back("scenario.attributes: array required");
        } else {
            for (const auto& aj : j["attributes"]) {
                Attribute a;
                if (!aj.contains("name") || !aj["name"].is_string())
                    errs.push_back("scenario.attributes[].name: string required");
                else
                    a.name = aj["name"].get<std::string>();
                if (!aj.contains("labels") || !aj["labels"].is_array())
                    errs.push_back("scenario.attributes[].labels: array required");
                else
                    for (const auto& l : aj["labels"]) {
                        if (!l.is_number_integer() || l.get<int>() < 0)
                            errs.push_back("scenario.attributes[].labels: nonnegative integers required");
                        else
                            a.labels.push_back(l.get<int>());
                    }
                sc.attributes.push_back(a);
            }
        }
    }
    if (errs.empty()) {
        try {
            sc.validate();
        } catch (const std::exception& e) {
            errs.push_back(std::string("scenario: ") + e.what());
        }
    }
    c.scenario = sc;
}

}  // namespace

ConfigParse parse_config(const std::string& json_text) {
    ConfigParse out;
    auto& c = out.config;
    auto& errs = out.errors;

    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        errs.push_back(std::string("json: ") + e.what());
        return out;
    }
    if (!j.is_object()) {
        errs.push_back("json: top-level object required");
        return out;
    }

    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        errs.push_back("schema_version: integer required");
    else if (j["schema_version"].get<int>() != kSchemaVersion)
        errs.push_back("schema_version: unsupported version " +
                       std::to_string(j["schema_version"].get<int>()));

    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        errs.push_back("experiment: string required");
    } else {
        c.experiment = j["experiment"].get<std::string>();
        if (!kExperiments.count(c.experiment))
            errs.push_back("experiment: unknown value '" + c.experiment + "'");
    }

    if (!j.contains("scenario") || !j["scenario"].is_object())
        errs.push_back("scenario: object required (weights, renderings, attributes)");
    else
        parse_scenario(j["scenario"], c, errs);

    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        if (s.contains("alpha")) c.sched.alpha = s["alpha"].get<double>();
        if (s.contains("T")) c.sched.T = s["T"].get<double>();
        if (s.contains("epsilon")) c.epsilon = s["epsilon"].get<double>();
        if (c.sched.alpha < 0.0) errs.push_back("schedule.alpha: must be >= 0");
        if (!(c.sched.T > 0.0)) errs.push_back("schedule.T: must be > 0");
        if (!(c.epsilon > 0.0)) errs.push_back("schedule.epsilon: must be > 0");
        if (c.epsilon >= c.sched.T) errs.push_back("schedule.epsilon: must be < T");
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("steps")) {
            if (!g["steps"].is_number_unsigned() || g["steps"].get<std::size_t>() == 0)
                errs.push_back("grid.steps: positive integer required");
            else
                c.steps = g["steps"].get<std::size_t>();
        }
        if (g.contains("spacing")) {
            const std::string sp = g["spacing"].get<std::string>();
            if (sp == "uniform")
                c.spacing = GridSpacing::uniform;
            else if (sp == "geometric-near-end")
                c.spacing = GridSpacing::geometric_near_end;
            else
                errs.push_back("grid.spacing: 'uniform' or 'geometric-near-end'");
        }
    }

    if (j.contains("sampler")) {
        const auto& s = j["sampler"];
        if (s.contains("corrector_steps"))
            c.sampler.corrector_steps = s["corrector_steps"].get<std::size_t>();
        if (s.contains("snr")) c.sampler.snr = s["snr"].get<double>();
        if (!(c.sampler.snr > 0.0)) errs.push_back("sampler.snr: must be > 0");
    }

    if (j.contains("mc")) {
        const auto& m = j["mc"];
        auto read_size = [&](const char* name, std::size_t& dst) {
            if (!m.contains(name)) return;
            if (!m[name].is_number_unsigned() || m[name].get<std::size_t>() == 0)
                errs.push_back(std::string("mc.") + name + ": integer >= 1 required");
            else
                dst = m[name].get<std::size_t>();
        };
        read_size("n_paths", c.n_paths);
        read_size("n_particles", c.n_particles);
        read_size("n_seeds", c.n_seeds);
        read_size("k", c.k);
    }

    if (j.contains("fork")) {
        const auto& f = j["fork"];
        if (f.contains("tau_list")) {
            if (!f["tau_list"].is_array())
                errs.push_back("fork.tau_list: array of times required");
            else
                for (const auto& t : f["tau_list"]) c.tau_list.push_back(t.get<double>());
        }
        for (double t : c.tau_list)
            if (t < 0.0 || t >= c.sched.T)
                errs.push_back("fork.tau_list: times must lie in [0, T)");
    }

    if (j.contains("mi")) {
        const auto& m = j["mi"];
        if (m.contains("phi")) c.phi = m["phi"].get<std::string>();
        if (m.contains("estimator")) {
            c.estimator = m["estimator"].get<std::string>();
            if (c.estimator != "general" && c.estimator != "linear" &&
                c.estimator != "score-gap")
                errs.push_back("mi.estimator: 'general', 'linear' or 'score-gap'");
        }
    }
    if (c.phi != "full" && c.scenario.attribute_index(c.phi) < 0)
        errs.push_back("mi.phi: unknown attribute '" + c.phi + "'");

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            errs.push_back("seed: unsigned integer required");
        else
            c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) c.out = j["out"].get<std::string>();

    if (c.experiment == "fork" && c.scenario.attributes.empty())
        errs.push_back("fork: scenario needs at least one attribute");
    if (c.experiment == "joint-vs-bridge" &&
        c.scenario.kind != LatentScenario::Kind::finite_mixture)
        errs.push_back("joint-vs-bridge: finite-mixture scenario required");

    return out;
}

ConfigParse load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

TimeGrid config_grid(const HarnessConfig& c) {
    return make_grid(c.sched.T, c.steps, c.epsilon, c.spacing);
}

}  // namespace lab::harness
