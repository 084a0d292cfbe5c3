#ifndef PARWIN_DECODERS_H
#define PARWIN_DECODERS_H

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parwin/window_view.h"

namespace parwin {

/// Defects handed to an inner decoder: global detector ids, all inside the view's window.
struct DefectSet {
    std::vector<uint32_t> vertex_ids;
};

struct Correction {
    /// Ascending fault ids.
    std::vector<uint32_t> edges;
    bool logical_flip = false;

    bool operator==(const Correction&) const = default;
};

/// Sorts, removes paired duplicates (XOR semantics) and recomputes the logical flip.
Correction make_correction(const DecodingGraph& graph, std::vector<uint32_t> edges);

/// True when the syndrome of `c` inside the view, with boundary edges absorbing parity, equals
/// the defect set and every edge of `c` belongs to the view.
bool is_valid_correction(const WindowView& view, const DefectSet& defects, const Correction& c);

double correction_weight(const Correction& c, const DecodingGraph& graph);

class InnerDecoder {
   public:
    virtual ~InnerDecoder() = default;
    virtual Correction decode(const WindowView& view, const DefectSet& defects) const = 0;
    virtual std::string name() const = 0;
};

enum class GrowthStep { HalfEdge, FullEdge };

struct UnionFindConfig {
    GrowthStep growth = GrowthStep::HalfEdge;
};

/// Union-find decoder: odd clusters grow by half-edges, fully grown edges fuse clusters through a
/// union-find forest (union by size, path compression), clusters freeze once even or attached to
/// the boundary, and each cluster's spanning forest is peeled into a correction.
/// Edge weights are ignored; every edge counts as one growth unit.
Correction uf_decode(const WindowView& view, const DefectSet& defects, const UnionFindConfig& config = {});

constexpr size_t kOracleMaxDefects = 14;

/// Minimum-weight pairing by exhaustive search over pairings (each defect matched to another
/// defect or to the boundary), realized by shortest paths. Throws SizeLimitError above
/// kOracleMaxDefects defects.
Correction exact_pairing_oracle(const WindowView& view, const DefectSet& defects);

class UnionFindDecoder final : public InnerDecoder {
   public:
    explicit UnionFindDecoder(UnionFindConfig config = {}) : config_(config) {
    }
    Correction decode(const WindowView& view, const DefectSet& defects) const override {
        return uf_decode(view, defects, config_);
    }
    std::string name() const override {
        return config_.growth == GrowthStep::HalfEdge ? "uf" : "uf-full-edge";
    }

   private:
    UnionFindConfig config_;
};

class PairingOracleDecoder final : public InnerDecoder {
   public:
    Correction decode(const WindowView& view, const DefectSet& defects) const override {
        return exact_pairing_oracle(view, defects);
    }
    std::string name() const override {
        return "exact-pairing";
    }
};

std::unique_ptr<InnerDecoder> make_decoder(const std::string& name);

}  // namespace parwin

#endif
