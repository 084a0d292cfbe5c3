#include "parwin/syndrome.h"

#include <algorithm>
#include <iterator>
#include <random>

#include "parwin/errors.h"
#include "parwin/rng.h"

namespace parwin {

std::vector<uint32_t> SyndromeStream::defect_ids() const {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < defects.size(); i++)
        if (defects[i])
            out.push_back(static_cast<uint32_t>(i));
    return out;
}

size_t SyndromeStream::num_defects() const {
    return static_cast<size_t>(std::count_if(defects.begin(), defects.end(), [](uint8_t b) { return b != 0; }));
}

ErrorConfiguration sample_error(const DecodingGraph& graph, double p, uint64_t seed) {
    if (!(p >= 0.0 && p < 0.5))
        throw ParameterError("sample_error: p must satisfy 0 <= p < 0.5");
    ErrorConfiguration err;
    err.seed = seed;
    if (p == 0.0)
        return err;
    std::mt19937_64 rng(splitmix64(seed));
    const auto n = static_cast<uint32_t>(graph.num_edges());
    for (uint32_t k = 0; k < n; k++)
        if (to_unit_interval(rng()) < p)
            err.triggered_faults.push_back(k);
    return err;
}

std::vector<uint8_t> syndrome_of(const DecodingGraph& graph, std::span<const uint32_t> faults) {
    std::vector<uint8_t> out(graph.num_detectors(), 0);
    for (uint32_t f : faults) {
        if (f >= graph.num_edges())
            throw IntegrityError("unknown fault id " + std::to_string(f));
        const auto& e = graph.edge(f);
        out[e.a] ^= 1;
        if (!graph.is_boundary(e.b))
            out[e.b] ^= 1;
    }
    return out;
}

bool logical_parity(const DecodingGraph& graph, std::span<const uint32_t> faults) {
    bool flip = false;
    for (uint32_t f : faults) {
        if (f >= graph.num_edges())
            throw IntegrityError("unknown fault id " + std::to_string(f));
        flip ^= graph.edge(f).logical;
    }
    return flip;
}

SyndromeStream extract_syndrome(const DecodingGraph& graph, const ErrorConfiguration& err) {
    SyndromeStream s;
    s.defects = syndrome_of(graph, err.triggered_faults);
    s.logical_frame = logical_parity(graph, err.triggered_faults);
    s.rounds = graph.num_rounds();
    s.round_offsets.resize(s.rounds + 1);
    for (int r = 0; r <= s.rounds; r++)
        s.round_offsets[r] = graph.round_begin(r);
    return s;
}

std::vector<uint32_t> symmetric_difference(std::span<const uint32_t> a, std::span<const uint32_t> b) {
    std::vector<uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace parwin
