#ifndef PARWIN_TILING_H
#define PARWIN_TILING_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "parwin/decoding_graph.h"
#include "parwin/window.h"

namespace parwin {

/// Points in space-time with edges between them. An edge whose second endpoint is kNoVertex is a
/// boundary edge and sits at its only endpoint. Distances are Euclidean with round spacing 1.
struct SpaceTimeGraph {
    static constexpr uint32_t kNoVertex = UINT32_MAX;

    std::vector<SpaceTimePoint> points;
    std::vector<std::pair<uint32_t, uint32_t>> edges;

    SpaceTimePoint midpoint(size_t edge) const;
    /// Largest endpoint-to-endpoint distance over all edges (the interaction radius R).
    double max_edge_span() const;
};

double distance(const SpaceTimePoint& a, const SpaceTimePoint& b);

/// Detectors at (space x, space y, round) with the decoding graph's edges.
SpaceTimeGraph space_time_graph(const DecodingGraph& graph);

struct Region {
    int id = 0;
    /// Colour index; colour k is decoded in layer k of the decode order (0 = A, 1 = B, 2 = C).
    int color = 0;
    std::vector<uint32_t> vertices;
    std::vector<uint32_t> edges;
    std::string bounds;
};

struct RegionPartition {
    SpaceTimeGraph graph;
    std::vector<Region> regions;
    std::vector<int> vertex_region;
    std::vector<int> edge_region;
    double interaction_radius = 0;

    int num_colors() const;
};

std::string color_label(int color);

/// Commit regions of a parallel window layout, coloured A/B by layer. Region k owns the rounds
/// of window k's commit interval; an edge belongs to the region containing its time midpoint,
/// with region k covering [commit.begin - 0.5, commit.end - 0.5).
RegionPartition color_1d_time(const DecodingGraph& graph, std::span<const Window> layout);

/// Unit grid of width x height points with nearest-neighbour edges, tiled by pointy-top hexagons
/// of side `cell_size` in axial coordinates (q, r) and coloured (q - r) mod 3. Same-coloured
/// hexagons are separated by exactly `cell_size`. Throws ParameterError unless cell_size > R.
RegionPartition color_hex_2d(int width, int height, double cell_size);

/// Lifts a 2D partition into 2D + time: every point is repeated for `rounds` rounds, time-like
/// edges join consecutive copies, and regions become columns with the same colour.
RegionPartition extrude(const RegionPartition& base, int rounds);

struct ColoringCheck {
    bool valid = true;
    /// Smallest distance between edges (midpoints) or vertices of two distinct same-colour regions.
    double min_same_color_separation = 0;
    bool edges_partitioned = true;
    std::string message;
};

/// Exhaustive scan over all same-colour region pairs.
ColoringCheck validate_coloring(const RegionPartition& partition);

struct Face {
    /// Neighbouring region, or -1 for the outer boundary of the partition.
    int neighbor = -1;
    TimeBoundary kind = TimeBoundary::Rough;
};

struct RegionBoundary {
    int region = 0;
    std::vector<Face> faces;
    /// Buffers extend through rough faces only; the final layer has none.
    bool has_buffer = false;

    int rough_faces() const;
};

/// Faces towards regions decoded earlier are smooth, faces towards regions decoded later are
/// rough, and outer faces take `outer_kind`. `decode_order` lists every colour once.
std::vector<RegionBoundary> assign_boundaries(const RegionPartition& partition, std::span<const int> decode_order,
                                              TimeBoundary outer_kind = TimeBoundary::Smooth);

/// Edges within distance w of the region (measured between edge midpoints and the region's
/// vertices and edge midpoints) that belong neither to the region nor to a region decoded earlier.
std::vector<uint32_t> buffer_edges(const RegionPartition& partition, int region, double w,
                                   std::span<const int> decode_order);

/// One line per region: id, colour label, sizes and bounding description.
void write_partition_manifest(std::ostream& out, const RegionPartition& partition);

}  // namespace parwin

#endif
