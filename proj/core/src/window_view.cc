#include "parwin/window_view.h"

#include <algorithm>

#include "parwin/errors.h"

namespace parwin {

std::string to_string(Layer layer) {
    switch (layer) {
        case Layer::Sliding:
            return "sliding";
        case Layer::A:
            return "A";
        case Layer::B:
            return "B";
    }
    return "?";
}

std::string to_string(TimeBoundary kind) {
    return kind == TimeBoundary::Rough ? "rough" : "smooth";
}

WindowView::WindowView(const DecodingGraph& graph, const Window& window) : graph_(&graph), window_(window) {
    if (window.rounds.begin < 0 || window.rounds.end > graph.num_rounds() || window.rounds.empty())
        throw ContractViolation("window rounds [" + std::to_string(window.rounds.begin) + ", " +
                                std::to_string(window.rounds.end) + ") do not fit the graph");
    begin_ = graph.round_begin(window.rounds.begin);
    end_ = graph.round_begin(window.rounds.end);
    const uint32_t local_boundary = end_ - begin_;

    for (uint32_t v = begin_; v < end_; v++) {
        for (uint32_t f : graph.incident(v)) {
            const auto& e = graph.edge(f);
            uint32_t other = e.a == v ? e.b : e.a;
            if (graph.is_boundary(other)) {
                edges_.push_back({v - begin_, local_boundary, f});
            } else if (contains_global(other)) {
                if (v < other)
                    edges_.push_back({v - begin_, other - begin_, f});
            } else {
                bool below = graph.vertex(other).round < window.rounds.begin;
                TimeBoundary face = below ? window.bottom : window.top;
                if (face == TimeBoundary::Rough)
                    edges_.push_back({v - begin_, local_boundary, f});
            }
        }
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) { return x.fault_id < y.fault_id; });

    offsets_.assign(local_boundary + 2, 0);
    for (const auto& e : edges_) {
        offsets_[e.u + 1]++;
        offsets_[e.v + 1]++;
    }
    for (size_t i = 1; i < offsets_.size(); i++)
        offsets_[i] += offsets_[i - 1];
    incidence_.resize(offsets_.back());
    std::vector<uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (uint32_t k = 0; k < edges_.size(); k++) {
        incidence_[fill[edges_[k].u]++] = k;
        incidence_[fill[edges_[k].v]++] = k;
    }
}

uint32_t WindowView::to_local(uint32_t global) const {
    if (global == graph_->boundary())
        return boundary();
    if (!contains_global(global))
        throw ContractViolation("detector " + std::to_string(global) + " lies outside window rounds [" +
                                std::to_string(window_.rounds.begin) + ", " + std::to_string(window_.rounds.end) +
                                ")");
    return global - begin_;
}

int64_t WindowView::find_edge(uint32_t fault_id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), fault_id,
                               [](const Edge& e, uint32_t f) { return e.fault_id < f; });
    if (it == edges_.end() || it->fault_id != fault_id)
        return -1;
    return it - edges_.begin();
}

}  // namespace parwin
