#ifndef PARWIN_WINDOW_H
#define PARWIN_WINDOW_H

#include <string>

namespace parwin {

/// Half-open interval of syndrome rounds.
struct RoundInterval {
    int begin = 0;
    int end = 0;

    int size() const {
        return end - begin;
    }
    bool empty() const {
        return end <= begin;
    }
    bool contains(int r) const {
        return begin <= r && r < end;
    }
    bool contains(const RoundInterval& other) const {
        return other.empty() || (begin <= other.begin && other.end <= end);
    }
    bool operator==(const RoundInterval&) const = default;
};

enum class Layer { Sliding, A, B };

/// Rough faces let defects match to the boundary vertex (the window's time-like edges leaving
/// through that face become boundary edges); smooth faces drop those edges.
enum class TimeBoundary { Rough, Smooth };

std::string to_string(Layer layer);
std::string to_string(TimeBoundary kind);

struct Window {
    int id = 0;
    RoundInterval rounds;
    RoundInterval commit;
    Layer layer = Layer::Sliding;
    TimeBoundary bottom = TimeBoundary::Smooth;
    TimeBoundary top = TimeBoundary::Smooth;

    bool operator==(const Window&) const = default;
};

/// A single window that covers and commits every round, i.e. global decoding.
inline Window global_window(int total_rounds) {
    return Window{0, {0, total_rounds}, {0, total_rounds}, Layer::Sliding, TimeBoundary::Smooth, TimeBoundary::Smooth};
}

}  // namespace parwin

#endif
