#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lab::harness {

// FNV-1a 64-bit digest of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

// Digest of a file's contents. Throws std::runtime_error if unreadable.
std::uint64_t file_digest(const std::string& path);

struct Manifest {
    std::string tool_version;
    std::uint64_t config_digest = 0;  // digest of the stored config copy
    std::uint64_t root_seed = 0;
    std::string wall_clock;  // ISO 8601 UTC
    std::vector<std::pair<std::string, std::uint64_t>> outputs;  // file, checksum
};

// Writes manifest.json into the output directory.
void write_manifest(const std::string& dir, const Manifest& m);

// Current UTC time as an ISO 8601 string.
std::string iso_now();

}  // namespace lab::harness
