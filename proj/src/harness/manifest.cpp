#include "lab/harness/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lab/harness/config.hpp"

namespace lab::harness {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001B3ULL;
    }
    return h;
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_digest: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& dir, const Manifest& m) {
    nlohmann::json j;
    j["tool_version"] = m.tool_version;
    j["config_digest"] = m.config_digest;
    j["root_seed"] = m.root_seed;
    j["wall_clock"] = m.wall_clock;
    nlohmann::json outs = nlohmann::json::object();
    for (const auto& [file, sum] : m.outputs) outs[file] = sum;
    j["outputs"] = outs;
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << j.dump(2) << '\n';
}

}  // namespace lab::harness
