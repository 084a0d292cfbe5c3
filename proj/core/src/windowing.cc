#include "parwin/windowing.h"

#include <algorithm>
#include <chrono>
#include <exception>
#include <ostream>

#include "parwin/errors.h"

namespace parwin {

void WindowConfig::validate_sliding() const {
    if (n_com < 1)
        throw ParameterError("sliding window needs n_com >= 1");
    if (n_buf < 0)
        throw ParameterError("sliding window needs n_buf >= 0");
}

void WindowConfig::validate_parallel() const {
    if (w < 1)
        throw ParameterError("parallel window needs w >= 1");
    if (n_com != w || n_buf != w)
        throw ParameterError("parallel window requires n_com = n_buf = w");
}

CommitResult split_commit(const DecodingGraph& graph, const Window& window, const Correction& tentative) {
    CommitResult out;
    const RoundInterval commit = window.commit;
    std::vector<uint32_t> outer;
    for (uint32_t f : tentative.edges) {
        const auto& e = graph.edge(f);
        bool a_in = commit.contains(graph.round_of(e.a));
        bool b_in = !graph.is_boundary(e.b) && commit.contains(graph.round_of(e.b));
        if (!a_in && !b_in)
            continue;
        out.committed_edges.push_back(f);
        out.logical_flip_partial ^= e.logical;
        if (a_in != b_in) {
            uint32_t other = a_in ? e.b : e.a;
            if (!graph.is_boundary(other))
                outer.push_back(other);
        }
    }
    std::sort(outer.begin(), outer.end());
    for (size_t i = 0; i < outer.size();) {
        size_t j = i;
        while (j < outer.size() && outer[j] == outer[i])
            j++;
        if ((j - i) % 2 == 1)
            out.artificial_defects.push_back(outer[i]);
        i = j;
    }
    return out;
}

std::vector<Window> window_layout(int total_rounds, int w) {
    if (total_rounds < 1)
        throw ParameterError("window_layout needs at least one round");
    if (w < 1)
        throw ParameterError("window_layout needs w >= 1");
    const int R = total_rounds;
    std::vector<Window> layout;
    if (R <= 3 * w) {
        layout.push_back({0, {0, R}, {0, R}, Layer::A, TimeBoundary::Smooth, TimeBoundary::Smooth});
        return layout;
    }

    const int period = 4 * w;
    int residue = R % period;
    if (residue > 2 * w)
        residue -= period;
    const bool ends_with_b = -w < residue && residue <= w;

    // Commit regions of the A windows, in order.
    std::vector<Window> a_windows;
    for (int k = 0;; k++) {
        Window a;
        a.layer = Layer::A;
        a.rounds = {period * k, std::min(period * k + 3 * w, R)};
        a.commit = k == 0 ? RoundInterval{0, 2 * w} : RoundInterval{period * k + w, period * k + 2 * w};
        if (a.commit.begin >= R)
            break;
        bool is_last_a = a.commit.end >= R || period * (k + 1) + w >= R;
        if (is_last_a && !ends_with_b) {
            a.rounds.end = R;
            a.commit.end = R;
        }
        a.bottom = a.rounds.begin == 0 ? TimeBoundary::Smooth : TimeBoundary::Rough;
        a.top = a.rounds.end == R ? TimeBoundary::Smooth : TimeBoundary::Rough;
        a_windows.push_back(a);
        if (is_last_a)
            break;
    }

    for (size_t k = 0; k < a_windows.size(); k++) {
        layout.push_back(a_windows[k]);
        int gap_begin = a_windows[k].commit.end;
        int gap_end = k + 1 < a_windows.size() ? a_windows[k + 1].commit.begin : R;
        if (gap_begin < gap_end)
            layout.push_back(
                {0, {gap_begin, gap_end}, {gap_begin, gap_end}, Layer::B, TimeBoundary::Smooth, TimeBoundary::Smooth});
    }
    for (size_t i = 0; i < layout.size(); i++)
        layout[i].id = static_cast<int>(i);
    return layout;
}

std::vector<Window> sliding_layout(int total_rounds, const WindowConfig& cfg) {
    cfg.validate_sliding();
    if (total_rounds < 1)
        throw ParameterError("sliding_layout needs at least one round");
    std::vector<Window> layout;
    for (int begin = 0; begin < total_rounds; begin += cfg.n_com) {
        Window win;
        win.id = static_cast<int>(layout.size());
        win.layer = Layer::Sliding;
        win.rounds = {begin, std::min(begin + cfg.n_com + cfg.n_buf, total_rounds)};
        bool last = win.rounds.end == total_rounds;
        win.commit = {begin, last ? total_rounds : begin + cfg.n_com};
        win.bottom = TimeBoundary::Smooth;
        win.top = last ? TimeBoundary::Smooth : TimeBoundary::Rough;
        layout.push_back(win);
        if (last)
            break;
    }
    return layout;
}

void write_layout_manifest(std::ostream& out, std::span<const Window> layout) {
    for (const auto& w : layout) {
        out << "window " << w.id << ' ' << to_string(w.layer) << " rounds=[" << w.rounds.begin << ',' << w.rounds.end
            << ") commit=[" << w.commit.begin << ',' << w.commit.end << ") bottom=" << to_string(w.bottom)
            << " top=" << to_string(w.top) << '\n';
    }
}

DefectSet defects_in_rounds(const DecodingGraph& graph, std::span<const uint8_t> defects, RoundInterval rounds) {
    DefectSet out;
    for (uint32_t v = graph.round_begin(rounds.begin); v < graph.round_begin(rounds.end); v++)
        if (defects[v])
            out.vertex_ids.push_back(v);
    return out;
}

CommitResult decode_window(const DecodingGraph& graph, const Window& window, const DefectSet& defects,
                           const InnerDecoder& inner) {
    if (!window.rounds.contains(window.commit))
        throw ContractViolation("commit interval must lie inside the window");
    WindowView view(graph, window);
    Correction tentative = inner.decode(view, defects);
    return split_commit(graph, window, tentative);
}

void apply_commit(const DecodingGraph& graph, const Window& window, const CommitResult& commit,
                  std::vector<uint8_t>& current) {
    for (uint32_t f : commit.committed_edges) {
        const auto& e = graph.edge(f);
        current[e.a] ^= 1;
        if (!graph.is_boundary(e.b))
            current[e.b] ^= 1;
    }
    for (uint32_t v = graph.round_begin(window.commit.begin); v < graph.round_begin(window.commit.end); v++)
        if (current[v])
            throw IntegrityError("window " + std::to_string(window.id) + " left an unresolved defect at detector " +
                                 std::to_string(v) + " in its commit region");
}

namespace {

Correction decode_sequentially(const DecodingGraph& graph, const SyndromeStream& stream,
                               std::span<const Window> layout, const InnerDecoder& inner) {
    std::vector<uint8_t> current = stream.defects;
    std::vector<uint32_t> edges;
    for (const auto& window : layout) {
        CommitResult commit = decode_window(graph, window, defects_in_rounds(graph, current, window.rounds), inner);
        apply_commit(graph, window, commit, current);
        edges.insert(edges.end(), commit.committed_edges.begin(), commit.committed_edges.end());
    }
    return make_correction(graph, std::move(edges));
}

void check_stream(const DecodingGraph& graph, const SyndromeStream& stream) {
    if (stream.defects.size() != graph.num_detectors())
        throw ContractViolation("syndrome stream does not match the decoding graph");
}

}  // namespace

Correction global_decode(const DecodingGraph& graph, const SyndromeStream& stream, const InnerDecoder& inner) {
    check_stream(graph, stream);
    const Window window = global_window(graph.num_rounds());
    return decode_sequentially(graph, stream, std::span(&window, 1), inner);
}

Correction sliding_window_decode(const DecodingGraph& graph, const SyndromeStream& stream, const WindowConfig& cfg,
                                 const InnerDecoder& inner) {
    check_stream(graph, stream);
    auto layout = sliding_layout(graph.num_rounds(), cfg);
    return decode_sequentially(graph, stream, layout, inner);
}

std::vector<size_t> b_window_dependencies(std::span<const Window> layout, size_t b_index) {
    std::vector<size_t> deps;
    if (b_index > 0 && layout[b_index - 1].layer == Layer::A)
        deps.push_back(b_index - 1);
    if (b_index + 1 < layout.size() && layout[b_index + 1].layer == Layer::A)
        deps.push_back(b_index + 1);
    return deps;
}

Correction parallel_window_decode(const DecodingGraph& graph, const SyndromeStream& stream, const WindowConfig& cfg,
                                  const InnerDecoder& inner, Executor& executor, DecodeTrace* trace) {
    using Clock = std::chrono::steady_clock;
    cfg.validate_parallel();
    check_stream(graph, stream);
    const auto t0 = Clock::now();
    auto seconds = [&](Clock::time_point t) { return std::chrono::duration<double>(t - t0).count(); };
    const std::vector<Window> layout = window_layout(graph.num_rounds(), cfg.w);

    struct Message {
        size_t index = 0;
        CommitResult result;
        std::exception_ptr error;
        TaskTiming timing;
    };
    BlockingQueue<Message> done;
    size_t in_flight = 0;

    auto dispatch = [&](size_t index, DefectSet defects) {
        in_flight++;
        TaskTiming timing{layout[index].id, layout[index].layer, seconds(Clock::now()), 0, 0, 0};
        executor.submit([&graph, &inner, &done, &layout, &seconds, index, timing, defects = std::move(defects)]() mutable {
            Message msg;
            msg.index = index;
            timing.started = seconds(Clock::now());
            timing.worker = current_worker_index();
            try {
                msg.result = decode_window(graph, layout[index], defects, inner);
            } catch (...) {
                msg.error = std::current_exception();
            }
            timing.finished = seconds(Clock::now());
            msg.timing = timing;
            done.push(std::move(msg));
        });
    };

    std::vector<int> waiting(layout.size(), 0);
    for (size_t i = 0; i < layout.size(); i++) {
        if (layout[i].layer == Layer::B)
            waiting[i] = static_cast<int>(b_window_dependencies(layout, i).size());
    }

    // Layer A reads the raw syndrome; windows in this layer never overlap.
    for (size_t i = 0; i < layout.size(); i++)
        if (layout[i].layer == Layer::A)
            dispatch(i, defects_in_rounds(graph, stream.defects, layout[i].rounds));

    std::vector<uint8_t> current = stream.defects;
    std::vector<uint32_t> edges;
    std::exception_ptr failure;
    size_t received = 0;
    while (in_flight > 0) {
        Message msg = done.pop();
        in_flight--;
        received++;
        msg.timing.received = seconds(Clock::now());
        if (trace)
            trace->tasks.push_back(msg.timing);
        if (msg.error) {
            if (!failure)
                failure = msg.error;
            continue;
        }
        if (failure)
            continue;
        const Window& window = layout[msg.index];
        try {
            apply_commit(graph, window, msg.result, current);
        } catch (...) {
            failure = std::current_exception();
            continue;
        }
        edges.insert(edges.end(), msg.result.committed_edges.begin(), msg.result.committed_edges.end());
        if (window.layer != Layer::A)
            continue;
        for (size_t b : {msg.index - 1, msg.index + 1}) {
            if (b >= layout.size() || layout[b].layer != Layer::B)
                continue;
            if (--waiting[b] == 0)
                dispatch(b, defects_in_rounds(graph, current, layout[b].rounds));
        }
    }
    if (trace)
        trace->wall_seconds = seconds(Clock::now());
    if (failure)
        std::rethrow_exception(failure);
    if (received != layout.size())
        throw std::logic_error("parallel window decode finished with undispatched windows");
    return make_correction(graph, std::move(edges));
}

}  // namespace parwin
