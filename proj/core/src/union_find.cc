#include <algorithm>
#include <numeric>

#include "parwin/decoders.h"
#include "parwin/errors.h"

namespace parwin {

namespace {

class ClusterForest {
   public:
    ClusterForest(const WindowView& view, const UnionFindConfig& config)
        : view_(view),
          config_(config),
          n_(view.num_vertices() + 1),
          parent_(n_),
          size_(n_, 1),
          parity_(n_, 0),
          on_boundary_(n_, 0),
          touched_(n_, 0),
          defect_(n_, 0),
          border_(n_),
          support_(view.edges().size(), 0) {
        std::iota(parent_.begin(), parent_.end(), 0u);
        on_boundary_[view.boundary()] = 1;
    }

    void add_defect(uint32_t v) {
        defect_[v] ^= 1;
        parity_[v] ^= 1;
        touch(v);
    }

    void grow() {
        std::vector<uint32_t> active = touched_list_;
        while (true) {
            std::vector<uint32_t> odd;
            for (uint32_t v : active) {
                uint32_t r = find(v);
                if (parity_[r] && !on_boundary_[r])
                    odd.push_back(r);
            }
            std::sort(odd.begin(), odd.end());
            odd.erase(std::unique(odd.begin(), odd.end()), odd.end());
            if (odd.empty())
                return;

            const uint8_t step = config_.growth == GrowthStep::HalfEdge ? 1 : 2;
            std::vector<uint32_t> fused;
            bool grew = false;
            for (uint32_t r : odd) {
                for (uint32_t v : border_[r]) {
                    for (uint32_t le : view_.incident(v)) {
                        if (support_[le] >= 2)
                            continue;
                        support_[le] = static_cast<uint8_t>(std::min(2, support_[le] + step));
                        grew = true;
                        if (support_[le] == 2)
                            fused.push_back(le);
                    }
                }
            }
            if (!grew)
                throw ContractViolation("union-find: odd cluster cannot reach a partner or the boundary");

            for (uint32_t le : fused) {
                const auto& e = view_.edges()[le];
                touch(e.u);
                touch(e.v);
                unite(e.u, e.v);
            }

            active.clear();
            for (uint32_t r : odd) {
                uint32_t root = find(r);
                prune_border(root);
                active.push_back(root);
            }
        }
    }

    /// Peels the spanning forest of fully grown edges, rooted at the boundary when present.
    std::vector<uint32_t> peel() {
        const uint32_t boundary = view_.boundary();
        std::vector<uint32_t> roots = touched_list_;
        std::sort(roots.begin(), roots.end());
        if (touched_[boundary]) {
            std::rotate(roots.begin(), roots.end() - 1, roots.end());
        }
        std::vector<uint8_t> seen(n_, 0);
        std::vector<uint32_t> parent_edge(n_, UINT32_MAX);
        std::vector<uint32_t> order;
        order.reserve(touched_list_.size());
        for (uint32_t root : roots) {
            if (seen[root])
                continue;
            seen[root] = 1;
            size_t head = order.size();
            order.push_back(root);
            while (head < order.size()) {
                uint32_t x = order[head++];
                if (x == boundary && x != root)
                    continue;
                for (uint32_t le : view_.incident(x)) {
                    if (support_[le] != 2)
                        continue;
                    const auto& e = view_.edges()[le];
                    uint32_t y = e.u == x ? e.v : e.u;
                    if (seen[y])
                        continue;
                    seen[y] = 1;
                    parent_edge[y] = le;
                    order.push_back(y);
                }
            }
        }

        std::vector<uint32_t> correction;
        for (size_t k = order.size(); k-- > 0;) {
            uint32_t x = order[k];
            if (parent_edge[x] == UINT32_MAX) {
                if (defect_[x] && x != boundary)
                    throw ContractViolation("union-find: peeling left an unmatched defect");
                continue;
            }
            if (!defect_[x])
                continue;
            const auto& e = view_.edges()[parent_edge[x]];
            uint32_t up = e.u == x ? e.v : e.u;
            correction.push_back(e.fault_id);
            defect_[x] = 0;
            defect_[up] ^= 1;
        }
        return correction;
    }

   private:
    uint32_t find(uint32_t x) {
        uint32_t root = x;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[x] != root) {
            uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a))
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        parity_[a] ^= parity_[b];
        on_boundary_[a] |= on_boundary_[b];
        auto& into = border_[a];
        into.insert(into.end(), border_[b].begin(), border_[b].end());
        std::vector<uint32_t>().swap(border_[b]);
    }

    void touch(uint32_t v) {
        if (touched_[v])
            return;
        touched_[v] = 1;
        touched_list_.push_back(v);
        // The boundary never grows; it only absorbs parity.
        if (v != view_.boundary())
            border_[v].push_back(v);
    }

    void prune_border(uint32_t root) {
        auto& border = border_[root];
        border.erase(std::remove_if(border.begin(), border.end(),
                                    [&](uint32_t v) {
                                        for (uint32_t le : view_.incident(v))
                                            if (support_[le] < 2)
                                                return false;
                                        return true;
                                    }),
                     border.end());
        std::sort(border.begin(), border.end());
        border.erase(std::unique(border.begin(), border.end()), border.end());
    }

    const WindowView& view_;
    UnionFindConfig config_;
    uint32_t n_;
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
    std::vector<uint8_t> parity_;
    std::vector<uint8_t> on_boundary_;
    std::vector<uint8_t> touched_;
    std::vector<uint8_t> defect_;
    std::vector<std::vector<uint32_t>> border_;
    std::vector<uint8_t> support_;
    std::vector<uint32_t> touched_list_;
};

}  // namespace

Correction uf_decode(const WindowView& view, const DefectSet& defects, const UnionFindConfig& config) {
    Correction out;
    if (defects.vertex_ids.empty())
        return out;
    ClusterForest forest(view, config);
    for (uint32_t v : defects.vertex_ids) {
        uint32_t local = view.to_local(v);
        if (local == view.boundary())
            throw ContractViolation("the boundary vertex cannot be a defect");
        forest.add_defect(local);
    }
    forest.grow();
    return make_correction(view.graph(), forest.peel());
}

}  // namespace parwin
