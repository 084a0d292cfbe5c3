#ifndef PARWIN_SYNDROME_H
#define PARWIN_SYNDROME_H

#include <cstdint>
#include <span>
#include <vector>

#include "parwin/decoding_graph.h"

namespace parwin {

struct ErrorConfiguration {
    /// Ascending fault ids.
    std::vector<uint32_t> triggered_faults;
    uint64_t seed = 0;
};

/// Detector outcomes of one shot. `defects` is indexed by detector id (round-major), so
/// `round(r)` is the per-round bit vector.
struct SyndromeStream {
    std::vector<uint8_t> defects;
    bool logical_frame = false;
    int rounds = 0;
    std::vector<uint32_t> round_offsets;

    std::span<const uint8_t> round(int r) const {
        return std::span<const uint8_t>(defects).subspan(round_offsets[r], round_offsets[r + 1] - round_offsets[r]);
    }
    std::vector<uint32_t> defect_ids() const;
    size_t num_defects() const;
    /// Parity the boundary vertex must absorb.
    bool boundary_parity() const {
        return num_defects() % 2 == 1;
    }
};

/// Each fault triggers independently with probability p. The result is a pure function of
/// (graph, p, seed).
ErrorConfiguration sample_error(const DecodingGraph& graph, double p, uint64_t seed);

SyndromeStream extract_syndrome(const DecodingGraph& graph, const ErrorConfiguration& err);

/// Per-detector XOR of incidences of the given faults. Throws IntegrityError on unknown ids.
std::vector<uint8_t> syndrome_of(const DecodingGraph& graph, std::span<const uint32_t> faults);

/// XOR of the `logical` flags of the given faults.
bool logical_parity(const DecodingGraph& graph, std::span<const uint32_t> faults);

/// Symmetric difference of two ascending fault lists.
std::vector<uint32_t> symmetric_difference(std::span<const uint32_t> a, std::span<const uint32_t> b);

}  // namespace parwin

#endif
