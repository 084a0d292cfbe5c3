#ifndef PARWIN_DECODING_GRAPH_H
#define PARWIN_DECODING_GRAPH_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace parwin {

enum class CodeFamily { Repetition, RotatedPlanar };

std::string to_string(CodeFamily family);
CodeFamily parse_code_family(const std::string& text);

struct CodeParams {
    CodeFamily family = CodeFamily::RotatedPlanar;
    int distance = 3;
    int rounds = 1;
    double p = 0.0;

    /// Throws ParameterError unless d >= 3 is odd, rounds >= 1 and 0 <= p < 0.5.
    void validate() const;

    /// Stabilizers of the decoded basis per round: d-1 for repetition, (d^2-1)/2 for rotated planar.
    int detectors_per_round() const;
    int data_qubits() const;
    /// Syndrome bits produced per round by the physical device (both bases for planar codes).
    int syndrome_bits_per_round() const;
};

struct DetectorVertex {
    uint32_t id = 0;
    std::array<int, 2> space{0, 0};
    int round = 0;
};

struct SpaceTimePoint {
    double x = 0;
    double y = 0;
    double t = 0;
};

struct GraphEdge {
    uint32_t a = 0;
    /// Either a detector id or the graph's boundary id.
    uint32_t b = 0;
    double weight = 1.0;
    uint32_t fault_id = 0;
    SpaceTimePoint midpoint;
    bool logical = false;
};

/// Matching graph: detector vertices ordered by round, a single virtual boundary vertex with id
/// `num_detectors()`, and one edge per independent fault. Fault ids are edge indices.
class DecodingGraph {
   public:
    DecodingGraph() = default;
    /// Validates and indexes an arbitrary graph. Vertices must be listed with ids 0..n-1 in
    /// non-decreasing round order; edges must have fault_id equal to their position.
    DecodingGraph(std::vector<DetectorVertex> vertices, std::vector<GraphEdge> edges, int num_rounds);

    size_t num_detectors() const {
        return vertices_.size();
    }
    size_t num_edges() const {
        return edges_.size();
    }
    uint32_t boundary() const {
        return static_cast<uint32_t>(vertices_.size());
    }
    bool is_boundary(uint32_t v) const {
        return v == boundary();
    }
    int num_rounds() const {
        return num_rounds_;
    }

    std::span<const DetectorVertex> vertices() const {
        return vertices_;
    }
    std::span<const GraphEdge> edges() const {
        return edges_;
    }
    const DetectorVertex& vertex(uint32_t id) const {
        return vertices_[id];
    }
    const GraphEdge& edge(uint32_t fault_id) const {
        return edges_[fault_id];
    }

    /// Fault ids of edges incident to a detector vertex, ascending.
    std::span<const uint32_t> incident(uint32_t v) const;

    /// First detector id of round r, r in [0, num_rounds]; round_begin(num_rounds) == num_detectors().
    uint32_t round_begin(int r) const {
        return round_offsets_[r];
    }

    std::vector<uint32_t> logical_edges() const;

    /// The shared weight when every edge carries the same weight.
    std::optional<double> uniform_weight() const {
        return uniform_weight_;
    }

    /// Round of a detector, or -1 for the boundary.
    int round_of(uint32_t v) const {
        return is_boundary(v) ? -1 : vertices_[v].round;
    }

   private:
    std::vector<DetectorVertex> vertices_;
    std::vector<GraphEdge> edges_;
    std::vector<uint32_t> round_offsets_;
    std::vector<uint32_t> incidence_offsets_;
    std::vector<uint32_t> incidence_;
    std::optional<double> uniform_weight_;
    int num_rounds_ = 0;
};

/// Edge weight shared by every fault under phenomenological noise: log((1-p)/p).
double fault_weight(double p);

/// Builds the X-error decoding graph under phenomenological noise.
///
/// Repetition codes use stabilizers Z_i Z_{i+1} with qubit 0 and qubit d-1 attached to the
/// boundary. Rotated planar codes place data qubits on a d x d grid; the decoded checks are the
/// plaquettes (i, j), 0 <= i, j <= d, with i + j odd, restricted to the bulk and the left/right
/// edges, so the top and bottom sides are the rough boundaries for X errors. Data errors in round
/// r give space-like edges in round r; measurement errors in rounds 0..rounds-2 give time-like
/// edges. The final round is the ideal data readout, so no time-like edges leave it.
/// Logical edges: the data errors on qubit 0 (repetition) or on the top row (planar).
DecodingGraph build_graph(const CodeParams& params);

/// One record per line: `vertex <id> <round> <x> <y>`, `boundary <id>`,
/// `edge <fault_id> <a> <b> <t_mid> <weight> <logical>`. Preceded by a `graph` header line.
void write_graph_text(std::ostream& out, const DecodingGraph& graph);
DecodingGraph read_graph_text(std::istream& in);

}  // namespace parwin

#endif
