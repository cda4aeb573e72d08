#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lab/harness/config.hpp"
#include "lab/harness/csv.hpp"
#include "lab/harness/experiments.hpp"
#include "lab/harness/manifest.hpp"

namespace fs = std::filesystem;
using namespace lab;
using namespace lab::harness;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
            const std::string& out_override, unsigned threads, bool no_plots) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    ConfigParse parsed = parse_config(text);
    if (!parsed.ok()) {
        std::cerr << "config errors (" << parsed.errors.size() << "):\n";
        for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
        return 2;
    }
    HarnessConfig cfg = parsed.config;
    if (has_seed) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out = out_override;

    fs::create_directories(cfg.out);
    // store the effective config (input text plus any overrides) for replay
    {
        std::ofstream copy(cfg.out + "/config.json", std::ios::binary);
        copy << text;
        if (has_seed || !out_override.empty()) {
            std::ofstream over(cfg.out + "/overrides.txt", std::ios::binary);
            if (has_seed) over << "seed=" << cfg.seed << "\n";
            if (!out_override.empty()) over << "out=" << cfg.out << "\n";
        }
    }

    RunOptions opts;
    opts.out_dir = cfg.out;
    opts.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    opts.plots = !no_plots;

    std::vector<std::string> files;
    try {
        files = run_experiment(cfg, opts);
    } catch (const std::exception& e) {
        std::ofstream diag(cfg.out + "/diagnostic.txt", std::ios::binary);
        diag << "experiment: " << cfg.experiment << "\n"
             << "seed: " << cfg.seed << "\n"
             << "failure: " << e.what() << "\n";
        std::cerr << "numerical failure: " << e.what() << "\n"
                  << "diagnostic written to " << cfg.out << "/diagnostic.txt\n";
        return 3;
    }

    Manifest m;
    m.tool_version = kToolVersion;
    m.config_digest = fnv1a64(text);
    m.root_seed = cfg.seed;
    m.wall_clock = iso_now();
    m.outputs.emplace_back("config.json", file_digest(cfg.out + "/config.json"));
    for (const auto& f : files) m.outputs.emplace_back(f, file_digest(cfg.out + "/" + f));
    write_manifest(cfg.out, m);

    std::cout << "wrote " << files.size() << " output file(s) to " << cfg.out << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const std::exception& e) {
        std::cout << "unreadable: " << e.what() << "\n";
        return 0;  // report-only
    }
    ConfigParse parsed = parse_config(text);
    if (parsed.ok()) {
        std::cout << "ok\n";
    } else {
        std::cout << parsed.errors.size() << " issue(s):\n";
        for (const auto& e : parsed.errors) std::cout << "  - " << e << "\n";
    }
    return 0;
}

int cmd_scenarios_list() {
    for (const auto& name : scenarios::names()) {
        const auto sc = scenarios::by_name(name);
        std::cout << name << ": dim=" << sc.dim;
        if (sc.kind == LatentScenario::Kind::finite_mixture)
            std::cout << ", components=" << sc.n_components();
        else
            std::cout << ", gaussian";
        std::cout << ", attributes=[";
        for (std::size_t a = 0; a < sc.attributes.size(); ++a) {
            if (a) std::cout << ", ";
            std::cout << sc.attributes[a].name;
        }
        std::cout << "]\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation laboratory for filtered-measurement generative SDEs"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool no_plots = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config root seed");
    run->add_option("--out", out_dir, "override the output directory");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_flag("--no-plots", no_plots, "skip SVG output");

    auto* validate = app.add_subcommand("validate", "check a config without running");
    std::string vpath;
    validate->add_option("--config", vpath, "JSON experiment config")->required();

    auto* scen = app.add_subcommand("scenarios", "built-in scenario utilities");
    scen->add_subcommand("list", "list the built-in reference scenarios");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir, threads, no_plots);
    if (validate->parsed()) return cmd_validate(vpath);
    if (scen->parsed()) return cmd_scenarios_list();
    return 2;
}
