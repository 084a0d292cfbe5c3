#ifndef PARWIN_WINDOW_VIEW_H
#define PARWIN_WINDOW_VIEW_H

#include <cstdint>
#include <span>
#include <vector>

#include "parwin/decoding_graph.h"
#include "parwin/window.h"

namespace parwin {

/// The decoding graph restricted to a window's rounds, with local vertex ids.
///
/// Local ids 0..num_vertices()-1 are the window's detectors in global order and `boundary()` is
/// the local boundary vertex. An edge joining a window detector to a detector outside the window
/// is kept as a boundary edge when it leaves through a rough face and dropped when the face is
/// smooth. Edges keep their global fault ids and are sorted by them.
class WindowView {
   public:
    struct Edge {
        uint32_t u = 0;
        uint32_t v = 0;
        uint32_t fault_id = 0;
    };

    WindowView(const DecodingGraph& graph, const Window& window);

    const DecodingGraph& graph() const {
        return *graph_;
    }
    const Window& window() const {
        return window_;
    }

    uint32_t num_vertices() const {
        return end_ - begin_;
    }
    uint32_t boundary() const {
        return num_vertices();
    }
    bool contains_global(uint32_t v) const {
        return begin_ <= v && v < end_;
    }
    uint32_t to_global(uint32_t local) const {
        return local == boundary() ? graph_->boundary() : begin_ + local;
    }
    /// Throws ContractViolation if the detector is outside the window.
    uint32_t to_local(uint32_t global) const;

    std::span<const Edge> edges() const {
        return edges_;
    }
    /// Local edge indices incident to a local vertex (boundary included), by ascending fault id.
    std::span<const uint32_t> incident(uint32_t local) const {
        return std::span<const uint32_t>(incidence_).subspan(offsets_[local], offsets_[local + 1] - offsets_[local]);
    }
    /// Index into edges() of the given fault, or -1 when the fault is not part of the view.
    int64_t find_edge(uint32_t fault_id) const;

    double edge_weight(uint32_t local_edge) const {
        return graph_->edge(edges_[local_edge].fault_id).weight;
    }

   private:
    const DecodingGraph* graph_;
    Window window_;
    uint32_t begin_ = 0;
    uint32_t end_ = 0;
    std::vector<Edge> edges_;
    std::vector<uint32_t> offsets_;
    std::vector<uint32_t> incidence_;
};

}  // namespace parwin

#endif
