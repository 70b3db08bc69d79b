#pragma once

#include <cstdint>
#include <random>

namespace anthracnose {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Fixed stream offsets below a master seed.
enum class Stream : std::uint64_t {
    kInhibition = 1,
    kVolume = 2,
    kRot = 3,
    kObsX = 4,
    kObsY = 5,
    kParticles = 6,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t offset) {
    return splitmix64(splitmix64(master) ^ splitmix64(offset * 0xd1b54a32d192ed03ULL));
}

inline std::mt19937_64 make_stream(std::uint64_t master, Stream s) {
    return std::mt19937_64(derive_seed(master, static_cast<std::uint64_t>(s)));
}

}  // namespace anthracnose
