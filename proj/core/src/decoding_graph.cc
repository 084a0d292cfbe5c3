#include "parwin/decoding_graph.h"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "parwin/errors.h"

namespace parwin {

std::string to_string(CodeFamily family) {
    return family == CodeFamily::Repetition ? "repetition" : "rotated_planar";
}

CodeFamily parse_code_family(const std::string& text) {
    if (text == "repetition" || text == "rep")
        return CodeFamily::Repetition;
    if (text == "rotated_planar" || text == "planar" || text == "surface")
        return CodeFamily::RotatedPlanar;
    throw ParameterError("unknown code family '" + text + "' (expected repetition or rotated_planar)");
}

void CodeParams::validate() const {
    if (distance < 3 || distance % 2 == 0)
        throw ParameterError("code distance must be an odd integer >= 3, got " + std::to_string(distance));
    if (rounds < 1)
        throw ParameterError("rounds must be >= 1, got " + std::to_string(rounds));
    if (!(p >= 0.0 && p < 0.5))
        throw ParameterError("physical error rate must satisfy 0 <= p < 0.5");
}

int CodeParams::detectors_per_round() const {
    return family == CodeFamily::Repetition ? distance - 1 : (distance * distance - 1) / 2;
}

int CodeParams::data_qubits() const {
    return family == CodeFamily::Repetition ? distance : distance * distance;
}

int CodeParams::syndrome_bits_per_round() const {
    return family == CodeFamily::Repetition ? distance - 1 : distance * distance - 1;
}

double fault_weight(double p) {
    if (p <= 0)
        return std::numeric_limits<double>::infinity();
    return std::log((1 - p) / p);
}

DecodingGraph::DecodingGraph(std::vector<DetectorVertex> vertices, std::vector<GraphEdge> edges, int num_rounds)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), num_rounds_(num_rounds) {
    if (num_rounds_ < 1)
        throw ParameterError("decoding graph needs at least one round");
    const auto n = static_cast<uint32_t>(vertices_.size());
    int prev_round = 0;
    for (uint32_t i = 0; i < n; i++) {
        const auto& v = vertices_[i];
        if (v.id != i)
            throw IntegrityError("vertex ids must be 0..n-1 in order; vertex " + std::to_string(i) + " has id " +
                                 std::to_string(v.id));
        if (v.round < 0 || v.round >= num_rounds_)
            throw IntegrityError("vertex " + std::to_string(i) + " has round outside [0, rounds)");
        if (v.round < prev_round)
            throw IntegrityError("vertices must be listed in non-decreasing round order");
        prev_round = v.round;
    }

    round_offsets_.assign(num_rounds_ + 1, n);
    for (uint32_t i = n; i-- > 0;)
        round_offsets_[vertices_[i].round] = i;
    for (int r = num_rounds_ - 1; r >= 0; r--)
        round_offsets_[r] = std::min(round_offsets_[r], round_offsets_[r + 1]);

    std::vector<uint32_t> degree(n + 1, 0);
    for (size_t k = 0; k < edges_.size(); k++) {
        auto& e = edges_[k];
        if (e.fault_id != k)
            throw IntegrityError("edge at position " + std::to_string(k) + " has fault_id " +
                                 std::to_string(e.fault_id));
        if (e.a == n && e.b < n)
            std::swap(e.a, e.b);
        if (e.a >= n)
            throw IntegrityError("edge " + std::to_string(k) + " does not touch a detector vertex");
        if (e.b > n)
            throw IntegrityError("edge " + std::to_string(k) + " refers to unknown vertex " + std::to_string(e.b));
        if (e.a == e.b)
            throw IntegrityError("edge " + std::to_string(k) + " is a self loop");
        degree[e.a]++;
        degree[e.b]++;
    }

    incidence_offsets_.assign(n + 2, 0);
    for (uint32_t v = 0; v <= n; v++)
        incidence_offsets_[v + 1] = incidence_offsets_[v] + degree[v];
    incidence_.resize(incidence_offsets_[n + 1]);
    std::vector<uint32_t> fill(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    for (const auto& e : edges_) {
        incidence_[fill[e.a]++] = e.fault_id;
        incidence_[fill[e.b]++] = e.fault_id;
    }

    if (!edges_.empty()) {
        double w = edges_.front().weight;
        bool uniform = true;
        for (const auto& e : edges_)
            uniform &= e.weight == w;
        if (uniform)
            uniform_weight_ = w;
    }
}

std::span<const uint32_t> DecodingGraph::incident(uint32_t v) const {
    return std::span<const uint32_t>(incidence_).subspan(incidence_offsets_[v],
                                                         incidence_offsets_[v + 1] - incidence_offsets_[v]);
}

std::vector<uint32_t> DecodingGraph::logical_edges() const {
    std::vector<uint32_t> out;
    for (const auto& e : edges_)
        if (e.logical)
            out.push_back(e.fault_id);
    return out;
}

namespace {

struct Check {
    std::array<int, 2> space;
};

/// Checks of a single round and, for each data qubit, the indices of the checks it touches
/// (-1 for a missing check, i.e. a boundary).
struct CodeLayout {
    std::vector<std::array<int, 2>> checks;
    std::vector<std::array<int, 2>> qubit_checks;
    std::vector<SpaceTimePoint> qubit_position;
    std::vector<bool> qubit_logical;
};

CodeLayout repetition_layout(int d) {
    CodeLayout layout;
    for (int s = 0; s < d - 1; s++)
        layout.checks.push_back({2 * s + 1, 0});
    for (int q = 0; q < d; q++) {
        layout.qubit_checks.push_back({q - 1 >= 0 ? q - 1 : -1, q < d - 1 ? q : -1});
        layout.qubit_position.push_back({2.0 * q, 0, 0});
        layout.qubit_logical.push_back(q == 0);
    }
    return layout;
}

CodeLayout planar_layout(int d) {
    CodeLayout layout;
    // Plaquette corner (i, j) is stored with space = {j, i}.
    std::vector<int> index((d + 1) * (d + 1), -1);
    for (int i = 1; i <= d - 1; i++) {
        for (int j = 0; j <= d; j++) {
            if ((i + j) % 2 == 1) {
                index[i * (d + 1) + j] = static_cast<int>(layout.checks.size());
                layout.checks.push_back({j, i});
            }
        }
    }
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            std::array<int, 2> touched{-1, -1};
            int k = 0;
            for (int i : {r, r + 1}) {
                if (i < 1 || i > d - 1)
                    continue;
                for (int j : {c, c + 1})
                    if (index[i * (d + 1) + j] >= 0)
                        touched[k++] = index[i * (d + 1) + j];
            }
            layout.qubit_checks.push_back(touched);
            layout.qubit_position.push_back({c + 0.5, r + 0.5, 0});
            layout.qubit_logical.push_back(r == 0);
        }
    }
    return layout;
}

}  // namespace

DecodingGraph build_graph(const CodeParams& params) {
    params.validate();
    CodeLayout layout =
        params.family == CodeFamily::Repetition ? repetition_layout(params.distance) : planar_layout(params.distance);
    const int per_round = static_cast<int>(layout.checks.size());
    const int rounds = params.rounds;
    const auto boundary = static_cast<uint32_t>(per_round * rounds);
    const double weight = fault_weight(params.p);

    std::vector<DetectorVertex> vertices;
    vertices.reserve(boundary);
    for (int r = 0; r < rounds; r++)
        for (int s = 0; s < per_round; s++)
            vertices.push_back({static_cast<uint32_t>(vertices.size()), layout.checks[s], r});

    std::vector<GraphEdge> edges;
    auto vid = [&](int r, int s) { return static_cast<uint32_t>(r * per_round + s); };
    for (int r = 0; r < rounds; r++) {
        for (size_t q = 0; q < layout.qubit_checks.size(); q++) {
            auto [c0, c1] = layout.qubit_checks[q];
            GraphEdge e;
            e.fault_id = static_cast<uint32_t>(edges.size());
            e.weight = weight;
            e.logical = layout.qubit_logical[q];
            if (c1 >= 0 && c0 >= 0) {
                e.a = vid(r, c0);
                e.b = vid(r, c1);
                e.midpoint = layout.qubit_position[q];
            } else {
                int c = c0 >= 0 ? c0 : c1;
                e.a = vid(r, c);
                e.b = boundary;
                e.midpoint = {static_cast<double>(layout.checks[c][0]), static_cast<double>(layout.checks[c][1]), 0};
            }
            e.midpoint.t = r;
            edges.push_back(e);
        }
        if (r + 1 < rounds) {
            for (int s = 0; s < per_round; s++) {
                GraphEdge e;
                e.fault_id = static_cast<uint32_t>(edges.size());
                e.weight = weight;
                e.a = vid(r, s);
                e.b = vid(r + 1, s);
                e.midpoint = {static_cast<double>(layout.checks[s][0]), static_cast<double>(layout.checks[s][1]),
                              r + 0.5};
                edges.push_back(e);
            }
        }
    }
    return DecodingGraph(std::move(vertices), std::move(edges), rounds);
}

void write_graph_text(std::ostream& out, const DecodingGraph& graph) {
    out << "graph " << graph.num_detectors() << ' ' << graph.num_edges() << ' ' << graph.num_rounds() << '\n';
    for (const auto& v : graph.vertices())
        out << "vertex " << v.id << ' ' << v.round << ' ' << v.space[0] << ' ' << v.space[1] << '\n';
    out << "boundary " << graph.boundary() << '\n';
    auto old_precision = out.precision(17);
    for (const auto& e : graph.edges()) {
        out << "edge " << e.fault_id << ' ' << e.a << ' ' << e.b << ' ' << e.midpoint.x << ' ' << e.midpoint.y << ' '
            << e.midpoint.t << ' ' << e.weight << ' ' << (e.logical ? 1 : 0) << '\n';
    }
    out.precision(old_precision);
}

DecodingGraph read_graph_text(std::istream& in) {
    std::string line;
    int rounds = 0;
    std::vector<DetectorVertex> vertices;
    std::vector<GraphEdge> edges;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "graph") {
            size_t nv, ne;
            ss >> nv >> ne >> rounds;
            vertices.reserve(nv);
            edges.reserve(ne);
        } else if (kind == "vertex") {
            DetectorVertex v;
            ss >> v.id >> v.round >> v.space[0] >> v.space[1];
            vertices.push_back(v);
        } else if (kind == "boundary") {
            continue;
        } else if (kind == "edge") {
            GraphEdge e;
            std::string weight;
            int logical = 0;
            ss >> e.fault_id >> e.a >> e.b >> e.midpoint.x >> e.midpoint.y >> e.midpoint.t >> weight >> logical;
            e.weight = std::stod(weight);
            e.logical = logical != 0;
            edges.push_back(e);
        } else {
            throw IntegrityError("graph text line " + std::to_string(line_no) + ": unknown record '" + kind + "'");
        }
        if (ss.fail())
            throw IntegrityError("graph text line " + std::to_string(line_no) + ": malformed record");
    }
    return DecodingGraph(std::move(vertices), std::move(edges), rounds);
}

}  // namespace parwin
