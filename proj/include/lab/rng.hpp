#pragma once

#include <cstdint>
#include <random>

namespace lab {

// SplitMix64 finalizer; used to derive independent engine seeds from
// (root_seed, stream_index) pairs without shared RNG state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Value-object handle for a reproducible noise stream. Identical
// (root_seed, stream_index) pairs replay bit-identical draw sequences.
struct RandomStream {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_index = 0;

    // Child stream keyed by i; chaining substreams keeps forks independent.
    RandomStream substream(std::uint64_t i) const {
        return RandomStream{mix64(root_seed ^ mix64(stream_index + 0x632BE59BD9B4E019ULL)), i};
    }

    std::mt19937_64 engine() const {
        return std::mt19937_64(mix64(root_seed ^ mix64(stream_index + 0xD1B54A32D192ED03ULL)));
    }
};

}  // namespace lab
