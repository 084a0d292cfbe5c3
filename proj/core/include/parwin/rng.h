#ifndef PARWIN_RNG_H
#define PARWIN_RNG_H

#include <cstdint>

namespace parwin {

/// SplitMix64 finalizer. Used to derive independent per-shot seeds from a base seed so that
/// sampled shots do not depend on how work is divided between threads.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t derive_seed(uint64_t base, uint64_t stream) {
    return splitmix64(splitmix64(base) ^ (stream * 0xD1B54A32D192ED03ULL));
}

/// Converts the top 53 bits of a 64-bit word to a double in [0, 1).
constexpr double to_unit_interval(uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace parwin

#endif
