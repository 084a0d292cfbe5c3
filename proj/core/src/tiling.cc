#include "parwin/tiling.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "parwin/errors.h"

namespace parwin {

double distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.t - b.t);
}

SpaceTimePoint SpaceTimeGraph::midpoint(size_t edge) const {
    auto [a, b] = edges[edge];
    if (b == kNoVertex)
        return points[a];
    const auto& pa = points[a];
    const auto& pb = points[b];
    return {(pa.x + pb.x) / 2, (pa.y + pb.y) / 2, (pa.t + pb.t) / 2};
}

double SpaceTimeGraph::max_edge_span() const {
    double span = 0;
    for (auto [a, b] : edges)
        if (b != kNoVertex)
            span = std::max(span, distance(points[a], points[b]));
    return span;
}

SpaceTimeGraph space_time_graph(const DecodingGraph& graph) {
    SpaceTimeGraph out;
    out.points.reserve(graph.num_detectors());
    for (const auto& v : graph.vertices())
        out.points.push_back({static_cast<double>(v.space[0]), static_cast<double>(v.space[1]), static_cast<double>(v.round)});
    out.edges.reserve(graph.num_edges());
    for (const auto& e : graph.edges())
        out.edges.emplace_back(e.a, graph.is_boundary(e.b) ? SpaceTimeGraph::kNoVertex : e.b);
    return out;
}

int RegionPartition::num_colors() const {
    int colors = 0;
    for (const auto& r : regions)
        colors = std::max(colors, r.color + 1);
    return colors;
}

std::string color_label(int color) {
    if (color >= 0 && color < 26)
        return std::string(1, static_cast<char>('A' + color));
    return "color" + std::to_string(color);
}

namespace {

void fill_members(RegionPartition& p) {
    for (auto& r : p.regions) {
        r.vertices.clear();
        r.edges.clear();
    }
    for (uint32_t v = 0; v < p.vertex_region.size(); v++)
        p.regions[p.vertex_region[v]].vertices.push_back(v);
    for (uint32_t e = 0; e < p.edge_region.size(); e++)
        p.regions[p.edge_region[e]].edges.push_back(e);
    p.interaction_radius = p.graph.max_edge_span();
}

struct Axial {
    int q = 0;
    int r = 0;
    bool operator<(const Axial& o) const {
        return q != o.q ? q < o.q : r < o.r;
    }
};

// Pointy-top hexagon containing (x, y), by cube rounding.
Axial hex_of(double x, double y, double side) {
    double qf = (std::sqrt(3.0) / 3 * x - y / 3) / side;
    double rf = (2.0 / 3 * y) / side;
    double sf = -qf - rf;
    double q = std::round(qf), r = std::round(rf), s = std::round(sf);
    double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
    if (dq > dr && dq > ds)
        q = -r - s;
    else if (dr > ds)
        r = -q - s;
    return {static_cast<int>(q), static_cast<int>(r)};
}

int hex_color(Axial h) {
    return ((h.q - h.r) % 3 + 3) % 3;
}

}  // namespace

RegionPartition color_1d_time(const DecodingGraph& graph, std::span<const Window> layout) {
    if (layout.empty())
        throw ParameterError("color_1d_time needs a non-empty layout");
    RegionPartition p;
    p.graph = space_time_graph(graph);
    int next_begin = 0;
    for (const auto& w : layout) {
        if (w.layer == Layer::Sliding)
            throw ParameterError("color_1d_time needs a parallel layout");
        if (w.commit.begin != next_begin)
            throw ParameterError("layout commit regions must tile the rounds in order");
        next_begin = w.commit.end;
        Region r;
        r.id = static_cast<int>(p.regions.size());
        r.color = w.layer == Layer::A ? 0 : 1;
        r.bounds = "t=[" + std::to_string(w.commit.begin) + "," + std::to_string(w.commit.end) + ")";
        p.regions.push_back(std::move(r));
    }
    if (next_begin != graph.num_rounds())
        throw ParameterError("layout does not cover every round of the graph");

    // Round r (and time midpoints in [r - 0.5, r + 0.5)) belong to the region committing round r.
    std::vector<int> region_of_round(graph.num_rounds());
    for (size_t k = 0; k < layout.size(); k++)
        for (int t = layout[k].commit.begin; t < layout[k].commit.end; t++)
            region_of_round[t] = static_cast<int>(k);
    auto region_at = [&](double t) {
        int r = static_cast<int>(std::floor(t + 0.5));
        return region_of_round[std::clamp(r, 0, graph.num_rounds() - 1)];
    };
    p.vertex_region.resize(p.graph.points.size());
    for (size_t v = 0; v < p.graph.points.size(); v++)
        p.vertex_region[v] = region_at(p.graph.points[v].t);
    p.edge_region.resize(p.graph.edges.size());
    for (size_t e = 0; e < p.graph.edges.size(); e++)
        p.edge_region[e] = region_at(p.graph.midpoint(e).t);
    fill_members(p);
    return p;
}

RegionPartition color_hex_2d(int width, int height, double cell_size) {
    if (width < 1 || height < 1)
        throw ParameterError("color_hex_2d needs a non-empty grid");
    RegionPartition p;
    for (int y = 0; y < height; y++)
        for (int x = 0; x < width; x++)
            p.graph.points.push_back({static_cast<double>(x), static_cast<double>(y), 0});
    auto id = [width](int x, int y) { return static_cast<uint32_t>(y * width + x); };
    for (int y = 0; y < height; y++)
        for (int x = 0; x < width; x++) {
            if (x + 1 < width)
                p.graph.edges.emplace_back(id(x, y), id(x + 1, y));
            if (y + 1 < height)
                p.graph.edges.emplace_back(id(x, y), id(x, y + 1));
        }
    const double radius = p.graph.edges.empty() ? 0 : p.graph.max_edge_span();
    if (!(cell_size > radius))
        throw ParameterError("hexagon side must exceed the interaction radius " + std::to_string(radius));

    std::map<Axial, int> index;
    auto region_for = [&](const SpaceTimePoint& pt) {
        Axial h = hex_of(pt.x, pt.y, cell_size);
        auto [it, inserted] = index.emplace(h, static_cast<int>(p.regions.size()));
        if (inserted) {
            Region r;
            r.id = it->second;
            r.color = hex_color(h);
            std::ostringstream bounds;
            bounds << "hex q=" << h.q << " r=" << h.r << " center=(" << cell_size * std::sqrt(3.0) * (h.q + h.r / 2.0)
                   << "," << cell_size * 1.5 * h.r << ") side=" << cell_size;
            r.bounds = bounds.str();
            p.regions.push_back(std::move(r));
        }
        return it->second;
    };
    for (const auto& pt : p.graph.points)
        p.vertex_region.push_back(region_for(pt));
    for (size_t e = 0; e < p.graph.edges.size(); e++)
        p.edge_region.push_back(region_for(p.graph.midpoint(e)));
    fill_members(p);
    return p;
}

RegionPartition extrude(const RegionPartition& base, int rounds) {
    if (rounds < 1)
        throw ParameterError("extrude needs at least one round");
    RegionPartition p;
    p.regions.reserve(base.regions.size());
    for (const auto& r : base.regions) {
        Region lifted;
        lifted.id = r.id;
        lifted.color = r.color;
        lifted.bounds = r.bounds + " t=[0," + std::to_string(rounds) + ")";
        p.regions.push_back(std::move(lifted));
    }
    const uint32_t layer_size = static_cast<uint32_t>(base.graph.points.size());
    for (int t = 0; t < rounds; t++)
        for (uint32_t v = 0; v < layer_size; v++) {
            const auto& pt = base.graph.points[v];
            p.graph.points.push_back({pt.x, pt.y, static_cast<double>(t)});
            p.vertex_region.push_back(base.vertex_region[v]);
        }
    for (int t = 0; t < rounds; t++) {
        const uint32_t off = static_cast<uint32_t>(t) * layer_size;
        for (size_t e = 0; e < base.graph.edges.size(); e++) {
            auto [a, b] = base.graph.edges[e];
            p.graph.edges.emplace_back(a + off, b == SpaceTimeGraph::kNoVertex ? b : b + off);
            p.edge_region.push_back(base.edge_region[e]);
        }
        if (t + 1 < rounds)
            for (uint32_t v = 0; v < layer_size; v++) {
                p.graph.edges.emplace_back(v + off, v + off + layer_size);
                p.edge_region.push_back(base.vertex_region[v]);
            }
    }
    fill_members(p);
    return p;
}

ColoringCheck validate_coloring(const RegionPartition& p) {
    ColoringCheck check;
    check.min_same_color_separation = std::numeric_limits<double>::infinity();
    std::vector<int> seen(p.graph.edges.size(), 0);
    for (const auto& r : p.regions)
        for (uint32_t e : r.edges)
            seen[e]++;
    for (size_t e = 0; e < seen.size(); e++)
        if (seen[e] != 1 || p.edge_region[e] < 0 || p.regions[p.edge_region[e]].color < 0) {
            check.edges_partitioned = false;
            check.valid = false;
            check.message = "edge " + std::to_string(e) + " is not in exactly one region";
            return check;
        }

    // Each region as a point cloud: its vertices and its edge midpoints.
    std::vector<std::vector<SpaceTimePoint>> clouds(p.regions.size());
    for (size_t k = 0; k < p.regions.size(); k++) {
        for (uint32_t v : p.regions[k].vertices)
            clouds[k].push_back(p.graph.points[v]);
        for (uint32_t e : p.regions[k].edges)
            clouds[k].push_back(p.graph.midpoint(e));
    }
    for (size_t i = 0; i < p.regions.size(); i++)
        for (size_t j = i + 1; j < p.regions.size(); j++) {
            if (p.regions[i].color != p.regions[j].color)
                continue;
            for (const auto& a : clouds[i])
                for (const auto& b : clouds[j]) {
                    double dist = distance(a, b);
                    if (dist < check.min_same_color_separation)
                        check.min_same_color_separation = dist;
                    if (dist < p.interaction_radius && check.valid) {
                        check.valid = false;
                        check.message = "regions " + std::to_string(i) + " and " + std::to_string(j) +
                                        " share colour " + color_label(p.regions[i].color) + " at distance " +
                                        std::to_string(dist);
                    }
                }
        }
    return check;
}

int RegionBoundary::rough_faces() const {
    return static_cast<int>(
        std::count_if(faces.begin(), faces.end(), [](const Face& f) { return f.kind == TimeBoundary::Rough; }));
}

namespace {

std::vector<int> color_ranks(const RegionPartition& p, std::span<const int> decode_order) {
    const int colors = p.num_colors();
    std::vector<int> rank(colors, -1);
    for (size_t i = 0; i < decode_order.size(); i++) {
        int c = decode_order[i];
        if (c < 0 || c >= colors)
            throw ValidationError("decode order names unknown colour " + std::to_string(c));
        if (rank[c] != -1)
            throw ValidationError("decode order lists colour " + color_label(c) + " twice");
        rank[c] = static_cast<int>(i);
    }
    for (int c = 0; c < colors; c++)
        if (rank[c] == -1)
            throw ValidationError("decode order is missing colour " + color_label(c));
    return rank;
}

}  // namespace

std::vector<RegionBoundary> assign_boundaries(const RegionPartition& p, std::span<const int> decode_order,
                                              TimeBoundary outer_kind) {
    const std::vector<int> rank = color_ranks(p, decode_order);
    std::vector<std::set<int>> neighbors(p.regions.size());
    auto link = [&](int a, int b) {
        if (a != b) {
            neighbors[a].insert(b);
            neighbors[b].insert(a);
        }
    };
    for (size_t e = 0; e < p.graph.edges.size(); e++) {
        auto [a, b] = p.graph.edges[e];
        int re = p.edge_region[e];
        link(re, p.vertex_region[a]);
        if (b != SpaceTimeGraph::kNoVertex) {
            link(re, p.vertex_region[b]);
            link(p.vertex_region[a], p.vertex_region[b]);
        }
    }

    // Outer faces: regions holding a point on an extremal coordinate of a non-degenerate axis.
    std::vector<int> outer(p.regions.size(), 0);
    if (!p.graph.points.empty()) {
        for (int axis = 0; axis < 3; axis++) {
            auto coord = [axis](const SpaceTimePoint& q) { return axis == 0 ? q.x : axis == 1 ? q.y : q.t; };
            double lo = coord(p.graph.points[0]), hi = lo;
            for (const auto& q : p.graph.points) {
                lo = std::min(lo, coord(q));
                hi = std::max(hi, coord(q));
            }
            if (lo == hi)
                continue;
            std::vector<std::array<bool, 2>> touches(p.regions.size(), {false, false});
            for (size_t v = 0; v < p.graph.points.size(); v++) {
                double c = coord(p.graph.points[v]);
                if (c == lo)
                    touches[p.vertex_region[v]][0] = true;
                if (c == hi)
                    touches[p.vertex_region[v]][1] = true;
            }
            for (size_t k = 0; k < p.regions.size(); k++)
                outer[k] += touches[k][0] + touches[k][1];
        }
    }

    std::vector<RegionBoundary> out;
    out.reserve(p.regions.size());
    for (size_t k = 0; k < p.regions.size(); k++) {
        RegionBoundary rb;
        rb.region = static_cast<int>(k);
        const int my_rank = rank[p.regions[k].color];
        for (int nb : neighbors[k]) {
            if (p.regions[nb].color == p.regions[k].color)
                throw ValidationError("adjacent regions " + std::to_string(k) + " and " + std::to_string(nb) +
                                      " share a colour");
            bool earlier = rank[p.regions[nb].color] < my_rank;
            rb.faces.push_back({nb, earlier ? TimeBoundary::Smooth : TimeBoundary::Rough});
        }
        for (int i = 0; i < outer[k]; i++)
            rb.faces.push_back({-1, outer_kind});
        rb.has_buffer = std::any_of(rb.faces.begin(), rb.faces.end(),
                                    [](const Face& f) { return f.neighbor >= 0 && f.kind == TimeBoundary::Rough; });
        out.push_back(std::move(rb));
    }
    return out;
}

std::vector<uint32_t> buffer_edges(const RegionPartition& p, int region, double w, std::span<const int> decode_order) {
    if (region < 0 || static_cast<size_t>(region) >= p.regions.size())
        throw ParameterError("buffer_edges: unknown region " + std::to_string(region));
    if (w < 0)
        throw ParameterError("buffer width must be non-negative");
    const std::vector<int> rank = color_ranks(p, decode_order);
    const Region& self = p.regions[region];
    std::vector<SpaceTimePoint> cloud;
    for (uint32_t v : self.vertices)
        cloud.push_back(p.graph.points[v]);
    for (uint32_t e : self.edges)
        cloud.push_back(p.graph.midpoint(e));

    std::vector<uint32_t> out;
    for (uint32_t e = 0; e < p.graph.edges.size(); e++) {
        const Region& owner = p.regions[p.edge_region[e]];
        if (owner.id == self.id || rank[owner.color] < rank[self.color])
            continue;
        const SpaceTimePoint m = p.graph.midpoint(e);
        for (const auto& q : cloud)
            if (distance(m, q) <= w) {
                out.push_back(e);
                break;
            }
    }
    return out;
}

void write_partition_manifest(std::ostream& out, const RegionPartition& p) {
    out << "partition regions=" << p.regions.size() << " colors=" << p.num_colors()
        << " radius=" << p.interaction_radius << '\n';
    for (const auto& r : p.regions)
        out << "region " << r.id << ' ' << color_label(r.color) << " vertices=" << r.vertices.size()
            << " edges=" << r.edges.size() << ' ' << r.bounds << '\n';
}

}  // namespace parwin
