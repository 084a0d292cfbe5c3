#ifndef PARWIN_WINDOWING_H
#define PARWIN_WINDOWING_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "parwin/decoders.h"
#include "parwin/executor.h"
#include "parwin/syndrome.h"
#include "parwin/window.h"

namespace parwin {

struct WindowConfig {
    int n_com = 0;
    int n_buf = 0;
    int w = 0;

    static WindowConfig sliding(int n_com, int n_buf) {
        return {n_com, n_buf, n_com};
    }
    /// Layer-A windows of 3w rounds committing the middle w.
    static WindowConfig parallel(int w) {
        return {w, w, w};
    }

    /// n_W: n_com + n_buf for sliding windows, 3w for parallel windows.
    int sliding_window_rounds() const {
        return n_com + n_buf;
    }
    int parallel_window_rounds() const {
        return 3 * w;
    }

    void validate_sliding() const;
    void validate_parallel() const;

    /// Windows narrower than the code distance may miss error chains of weight below (d+1)/2.
    bool fidelity_safe(int distance) const {
        return w >= distance && n_buf >= distance;
    }
};

struct CommitResult {
    /// Ascending fault ids.
    std::vector<uint32_t> committed_edges;
    /// Ascending detector ids outside the commit region where committed chains were cut.
    std::vector<uint32_t> artificial_defects;
    bool logical_flip_partial = false;
};

/// Commits the tentative edges that touch a detector of the commit region. Edges with both
/// endpoints inside have their midpoint inside; an edge with one endpoint outside crosses the
/// commit face and its outer endpoint becomes an artificial defect.
CommitResult split_commit(const DecodingGraph& graph, const Window& window, const Correction& tentative);

/// Parallel layout in temporal order A0, B0, A1, B1, ...
///
/// A0 spans [0, 3w) and commits [0, 2w); A_k (k >= 1) spans [4kw, 4kw+3w) and commits its middle
/// w rounds; B_k fills the rounds between the commit regions of A_k and A_{k+1}. When
/// total_rounds mod 4w, taken in (-2w, 2w], lies in (-w, w] the layout ends with a (possibly
/// short) B window; otherwise it ends with an A window whose commit region runs to the last
/// round. Layouts of at most 3w rounds are one A window committing everything. The first and
/// last faces of the layout are smooth, other A faces rough, B faces smooth.
std::vector<Window> window_layout(int total_rounds, int w);

/// Sliding layout: windows advance by n_com; the window that reaches the last round commits it all.
std::vector<Window> sliding_layout(int total_rounds, const WindowConfig& cfg);

/// One text line per window: id, layer, round interval, commit interval, face kinds.
void write_layout_manifest(std::ostream& out, std::span<const Window> layout);

/// Detectors flagged in `defects` (indexed by global id) whose round lies in `rounds`.
DefectSet defects_in_rounds(const DecodingGraph& graph, std::span<const uint8_t> defects, RoundInterval rounds);

/// Decodes one window and splits off its committed part.
CommitResult decode_window(const DecodingGraph& graph, const Window& window, const DefectSet& defects,
                           const InnerDecoder& inner);

/// XORs the syndrome of the committed edges into `current`, then checks that the commit region
/// has no defects left. Throws IntegrityError otherwise.
void apply_commit(const DecodingGraph& graph, const Window& window, const CommitResult& commit,
                  std::vector<uint8_t>& current);

Correction global_decode(const DecodingGraph& graph, const SyndromeStream& stream, const InnerDecoder& inner);

Correction sliding_window_decode(const DecodingGraph& graph, const SyndromeStream& stream, const WindowConfig& cfg,
                                 const InnerDecoder& inner);

struct TaskTiming {
    int window_id = 0;
    Layer layer = Layer::A;
    /// Seconds since the decode call started.
    double dispatched = 0;
    double started = 0;
    double finished = 0;
    double received = 0;
    /// Pool worker that ran the task, -1 when unknown.
    int worker = -1;
};

struct DecodeTrace {
    std::vector<TaskTiming> tasks;
    double wall_seconds = 0;
};

/// Two-layer parallel decoding. All A windows are submitted at once; a B window is submitted as
/// soon as its neighbouring A windows have reported. Results are merged by the calling thread.
Correction parallel_window_decode(const DecodingGraph& graph, const SyndromeStream& stream, const WindowConfig& cfg,
                                  const InnerDecoder& inner, Executor& executor, DecodeTrace* trace = nullptr);

/// Index of the layer-A neighbours of a B window in a parallel layout (one or two entries).
std::vector<size_t> b_window_dependencies(std::span<const Window> layout, size_t b_index);

}  // namespace parwin

#endif
