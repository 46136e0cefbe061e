#ifndef SEQSPEC_RNG_HPP
#define SEQSPEC_RNG_HPP

#include <cstdint>

namespace seqspec {

// splitmix64 finalizer; used to derive independent substream seeds
// from a single master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed for a named substream (trial index, stream index, step...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b + 0x517cc1b727220a95ULL));
}

}  // namespace seqspec

#endif  // SEQSPEC_RNG_HPP
