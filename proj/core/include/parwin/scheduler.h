#ifndef PARWIN_SCHEDULER_H
#define PARWIN_SCHEDULER_H

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <thread>
#include <vector>

#include "parwin/decoding_graph.h"
#include "parwin/executor.h"
#include "parwin/resources.h"
#include "parwin/windowing.h"

namespace parwin {

/// Fixed-size worker pool.
class ThreadPool final : public Executor {
   public:
    explicit ThreadPool(size_t workers);
    ~ThreadPool() override;
    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    void submit(std::function<void()> task) override;
    size_t concurrency() const override {
        return threads_.size();
    }

   private:
    BlockingQueue<std::function<void()>> queue_;
    std::vector<std::jthread> threads_;
};

/// 2n decoding blocks DA_0..DA_{n-1}, DB_0..DB_{n-1}. Window A_j runs on DA_{j mod n} and B_j on
/// DB_{j mod n}; DB_i waits for DA_i and DA_{(i+1) mod n}.
struct PipelinePlan {
    int n = 1;
    int w = 3;

    int workers() const {
        return 2 * n;
    }
    int a_block(int ordinal) const {
        return ordinal % n;
    }
    int b_block(int ordinal) const {
        return n + ordinal % n;
    }
    std::array<int, 2> b_predecessor_blocks(int i) const {
        return {i % n, (i + 1) % n};
    }
    void validate() const;
};

/// Where syndrome rounds come from. `rounds_available` is non-decreasing over time.
class SyndromeSource {
   public:
    using Clock = std::chrono::steady_clock;
    virtual ~SyndromeSource() = default;
    virtual const SyndromeStream& stream() const = 0;
    /// Called once when the pipeline starts consuming.
    virtual void start(Clock::time_point now) = 0;
    virtual int rounds_available(Clock::time_point now) const = 0;
    /// Time at which round r (0-based) has been fully measured.
    virtual Clock::time_point arrival(int r) const = 0;
};

/// Replays a pre-sampled stream; every round is available immediately.
class InMemorySource final : public SyndromeSource {
   public:
    explicit InMemorySource(const SyndromeStream& stream) : stream_(&stream) {
    }
    const SyndromeStream& stream() const override {
        return *stream_;
    }
    void start(Clock::time_point now) override {
        start_ = now;
    }
    int rounds_available(Clock::time_point) const override {
        return stream_->rounds;
    }
    Clock::time_point arrival(int) const override {
        return start_;
    }

   private:
    const SyndromeStream* stream_;
    Clock::time_point start_{};
};

/// Emits one round every tau_rd seconds of wall-clock time.
class RateLimitedSource final : public SyndromeSource {
   public:
    RateLimitedSource(const SyndromeStream& stream, double tau_rd);
    const SyndromeStream& stream() const override {
        return *stream_;
    }
    void start(Clock::time_point now) override {
        start_ = now;
    }
    int rounds_available(Clock::time_point now) const override;
    Clock::time_point arrival(int r) const override;

   private:
    const SyndromeStream* stream_;
    std::chrono::nanoseconds period_;
    Clock::time_point start_{};
};

struct PipelineRun {
    Correction correction;
    std::vector<TaskTiming> tasks;
    double wall_seconds = 0;
};

/// Online parallel window decoder with one thread per decoding block. A windows are dispatched as
/// soon as their last round has arrived; B windows once both neighbouring A results are merged.
/// The calling thread acts as process manager and sole owner of the running correction.
class Pipeline {
   public:
    Pipeline(const DecodingGraph& graph, PipelinePlan plan, const InnerDecoder& inner);
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    PipelineRun run(SyndromeSource& source);

    const PipelinePlan& plan() const {
        return plan_;
    }

   private:
    struct Job;
    struct Block;

    const DecodingGraph& graph_;
    PipelinePlan plan_;
    const InnerDecoder& inner_;
    std::vector<std::unique_ptr<Block>> blocks_;
};

PipelineRun run_pipeline(const DecodingGraph& graph, const SyndromeStream& stream, const PipelinePlan& plan,
                         const InnerDecoder& inner);

struct BacklogVerdict {
    bool stable = true;
    double f = 1;
    /// Lower-bound slow-down c f^k with c = 1, or 1 when stable.
    double slowdown = 1;
};

BacklogVerdict check_backlog(double r_gen, double r_proc, int t_depth);

/// Mean per-task dispatch latency: time from a task being ready (dispatched and its worker idle)
/// to its start, plus time from its finish to the manager receiving the result.
double estimate_dispatch_overhead(std::span<const TaskTiming> tasks);

enum class ThroughputMode { ParallelPool, Pipeline };

struct ThroughputReport {
    CodeFamily family = CodeFamily::RotatedPlanar;
    int d = 0;
    double p = 0;
    int rounds = 0;
    int workers = 0;
    int shots = 0;
    double r_dec_mean = 0;
    double r_dec_stderr = 0;
    double r_proc = 0;
    double r_gen = 0;
    double f = 0;
    double wall_time = 0;
    double tau_w_mean = 0;
    std::vector<double> tau_w_samples;
    double tau0_est = 0;
    /// N_par * tau_0 > tau_W: workers cannot all be kept busy.
    bool dispatch_bound = false;
};

struct ThroughputOptions {
    CodeFamily family = CodeFamily::RotatedPlanar;
    int distance = 9;
    double p = 0.02;
    int workers = 1;
    int shots = 1;
    uint64_t seed = 1;
    /// Round time used for r_gen.
    double tau_rd = 1e-6;
    ThroughputMode mode = ThroughputMode::ParallelPool;
    /// Rounds per shot; 0 selects 8 (N_par + 1) d.
    int rounds = 0;
};

ThroughputReport measure_throughput(const ThroughputOptions& options, const InnerDecoder& inner);

/// Deterministic discrete-event model of the pipeline with injected tau_rd, tau_W and tau_0.
struct SimulatedPipeline {
    double makespan = 0;
    /// Steady-state rounds per second over the second half of the run.
    double r_dec = 0;
    /// Per B window (and a final A window): finish time minus arrival of its last round.
    std::vector<double> lag;
    bool lag_bounded = true;
};

/// With `online` every A window waits for its data at tau_rd per round; otherwise all data is
/// present at time zero and the result measures processing capacity.
SimulatedPipeline simulate_pipeline(int total_rounds, const PipelinePlan& plan, const TimingModel& timing,
                                    bool online);

}  // namespace parwin

#endif
