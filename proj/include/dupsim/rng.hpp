#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dupsim {

// Counter based randomness. Every draw is a pure function of a key built by
// hashing the master seed with the identifiers of the thing being drawn
// (iteration, link, packet, attempt...). Nothing carries hidden stream state,
// so simulations are reproducible regardless of event interleaving or thread
// count, and cancelling one transmission never shifts the outcome of another.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t v) {
    return splitmix64(seed ^ (v + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t p : parts) h = hash_mix(h, p);
    return h;
}

// Uniform in (0, 1]. The open lower bound keeps log() finite.
inline double u01(std::uint64_t key) {
    return (static_cast<double>(key >> 11) + 1.0) * 0x1.0p-53;
}

// Unit mean exponential draw; the power gain of Rayleigh block fading.
inline double exp1(std::uint64_t key) { return -std::log(u01(key)); }

// Standard normal via Box-Muller on two sub draws of the key.
inline double std_normal(std::uint64_t key) {
    const double u1 = u01(splitmix64(key));
    const double u2 = u01(splitmix64(key ^ 0xD1B54A32D192ED03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

// Domain separation tags so unrelated draws can never collide even when their
// integer identifiers do.
namespace rngtag {
constexpr std::uint64_t kIteration = 0x49544552;  // per iteration seed
constexpr std::uint64_t kUePos = 0x55455053;      // UE placement
constexpr std::uint64_t kNodePos = 0x4E4F4445;    // tier-2 placement
constexpr std::uint64_t kShadow = 0x53484144;     // per link shadowing
constexpr std::uint64_t kFading = 0x46414445;     // per attempt fading
constexpr std::uint64_t kInterf = 0x494E5446;     // interferer draws
constexpr std::uint64_t kUlPick = 0x554C504B;     // uplink interferer choice
constexpr std::uint64_t kBernoulli = 0x4245524E;  // scripted loss models
} // namespace rngtag

// Seed for one Monte Carlo iteration, derived (never sequential) from the
// campaign master seed.
inline std::uint64_t iteration_seed(std::uint64_t master_seed, std::uint64_t index) {
    return hash_key({rngtag::kIteration, master_seed, index});
}

} // namespace dupsim
