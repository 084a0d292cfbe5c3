#include "parwin/decoders.h"

#include <algorithm>
#include <limits>
#include <queue>

#include "parwin/errors.h"
#include "parwin/syndrome.h"

namespace parwin {

Correction make_correction(const DecodingGraph& graph, std::vector<uint32_t> edges) {
    std::sort(edges.begin(), edges.end());
    std::vector<uint32_t> kept;
    kept.reserve(edges.size());
    for (size_t i = 0; i < edges.size();) {
        size_t j = i;
        while (j < edges.size() && edges[j] == edges[i])
            j++;
        if ((j - i) % 2 == 1)
            kept.push_back(edges[i]);
        i = j;
    }
    Correction c;
    c.logical_flip = logical_parity(graph, kept);
    c.edges = std::move(kept);
    return c;
}

bool is_valid_correction(const WindowView& view, const DefectSet& defects, const Correction& c) {
    std::vector<uint8_t> parity(view.num_vertices() + 1, 0);
    for (uint32_t f : c.edges) {
        int64_t le = view.find_edge(f);
        if (le < 0)
            return false;
        const auto& e = view.edges()[le];
        parity[e.u] ^= 1;
        parity[e.v] ^= 1;
    }
    for (uint32_t v : defects.vertex_ids) {
        if (!view.contains_global(v))
            return false;
        parity[view.to_local(v)] ^= 1;
    }
    for (uint32_t v = 0; v < view.num_vertices(); v++)
        if (parity[v])
            return false;
    return true;
}

double correction_weight(const Correction& c, const DecodingGraph& graph) {
    double total = 0;
    for (uint32_t f : c.edges)
        total += graph.edge(f).weight;
    return total;
}

namespace {

struct ShortestPathTree {
    std::vector<double> dist;
    std::vector<uint32_t> parent_edge;
};

/// Dijkstra from `source`. The boundary is a terminal: paths may end there but never pass
/// through it. Uniform-weight graphs are searched in hop units.
ShortestPathTree shortest_paths(const WindowView& view, uint32_t source, bool unit) {
    const uint32_t n = view.num_vertices() + 1;
    ShortestPathTree tree{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                          std::vector<uint32_t>(n, UINT32_MAX)};
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    tree.dist[source] = 0;
    queue.push({0.0, source});
    std::vector<uint8_t> done(n, 0);
    while (!queue.empty()) {
        auto [d, x] = queue.top();
        queue.pop();
        if (done[x])
            continue;
        done[x] = 1;
        if (x == view.boundary())
            continue;
        for (uint32_t le : view.incident(x)) {
            const auto& e = view.edges()[le];
            uint32_t y = e.u == x ? e.v : e.u;
            double nd = d + (unit ? 1.0 : view.edge_weight(le));
            if (nd < tree.dist[y]) {
                tree.dist[y] = nd;
                tree.parent_edge[y] = le;
                queue.push({nd, y});
            }
        }
    }
    return tree;
}

void append_path(const WindowView& view, const ShortestPathTree& tree, uint32_t source, uint32_t target,
                 std::vector<uint32_t>& out) {
    uint32_t x = target;
    while (x != source) {
        uint32_t le = tree.parent_edge[x];
        if (le == UINT32_MAX)
            throw ContractViolation("exact pairing: no path between matched vertices");
        const auto& e = view.edges()[le];
        out.push_back(e.fault_id);
        x = e.u == x ? e.v : e.u;
    }
}

}  // namespace

Correction exact_pairing_oracle(const WindowView& view, const DefectSet& defects) {
    const size_t k = defects.vertex_ids.size();
    if (k > kOracleMaxDefects)
        throw SizeLimitError("exact pairing oracle supports at most " + std::to_string(kOracleMaxDefects) +
                             " defects, got " + std::to_string(k));
    if (k == 0)
        return {};

    std::vector<uint32_t> local(k);
    for (size_t i = 0; i < k; i++)
        local[i] = view.to_local(defects.vertex_ids[i]);
    std::vector<size_t> order(k);
    for (size_t i = 0; i < k; i++)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return local[a] < local[b]; });
    std::vector<uint32_t> sorted(k);
    for (size_t i = 0; i < k; i++)
        sorted[i] = local[order[i]];
    local = std::move(sorted);
    for (size_t i = 1; i < k; i++)
        if (local[i] == local[i - 1])
            throw ContractViolation("exact pairing: duplicate defect");

    const bool unit = view.graph().uniform_weight().has_value();
    std::vector<ShortestPathTree> trees;
    trees.reserve(k);
    for (uint32_t s : local)
        trees.push_back(shortest_paths(view, s, unit));

    const double inf = std::numeric_limits<double>::infinity();
    const uint32_t full = (1u << k) - 1;
    std::vector<double> best(full + 1, inf);
    // choice[mask] = partner index of the lowest set bit, or k for the boundary.
    std::vector<uint8_t> choice(full + 1, 0);
    best[0] = 0;
    for (uint32_t mask = 1; mask <= full; mask++) {
        int i = __builtin_ctz(mask);
        uint32_t rest = mask & ~(1u << i);
        double to_boundary = trees[i].dist[view.boundary()] + best[rest];
        if (to_boundary < best[mask]) {
            best[mask] = to_boundary;
            choice[mask] = static_cast<uint8_t>(k);
        }
        for (uint32_t j = i + 1; j < k; j++) {
            if (!(rest & (1u << j)))
                continue;
            double paired = trees[i].dist[local[j]] + best[rest & ~(1u << j)];
            if (paired < best[mask]) {
                best[mask] = paired;
                choice[mask] = static_cast<uint8_t>(j);
            }
        }
    }
    if (best[full] == inf)
        throw ContractViolation("exact pairing: defects cannot be paired within the window");

    std::vector<uint32_t> edges;
    for (uint32_t mask = full; mask != 0;) {
        int i = __builtin_ctz(mask);
        uint32_t j = choice[mask];
        if (j == k) {
            append_path(view, trees[i], local[i], view.boundary(), edges);
            mask &= ~(1u << i);
        } else {
            append_path(view, trees[i], local[i], local[j], edges);
            mask &= ~((1u << i) | (1u << j));
        }
    }
    return make_correction(view.graph(), std::move(edges));
}

std::unique_ptr<InnerDecoder> make_decoder(const std::string& name) {
    if (name == "uf")
        return std::make_unique<UnionFindDecoder>();
    if (name == "uf-full-edge")
        return std::make_unique<UnionFindDecoder>(UnionFindConfig{GrowthStep::FullEdge});
    if (name == "exact" || name == "exact-pairing" || name == "oracle")
        return std::make_unique<PairingOracleDecoder>();
    throw ParameterError("unknown inner decoder '" + name + "' (expected uf, uf-full-edge or exact)");
}

}  // namespace parwin
