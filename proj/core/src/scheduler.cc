#include "parwin/scheduler.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <optional>

#include "parwin/errors.h"
#include "parwin/rng.h"

namespace parwin {

using Clock = std::chrono::steady_clock;

ThreadPool::ThreadPool(size_t workers) {
    if (workers < 1)
        throw ParameterError("thread pool needs at least one worker");
    threads_.reserve(workers);
    for (size_t i = 0; i < workers; i++) {
        threads_.emplace_back([this, i] {
            detail::worker_index = static_cast<int>(i);
            while (true) {
                auto task = queue_.pop();
                if (!task)
                    return;
                task();
            }
        });
    }
}

ThreadPool::~ThreadPool() {
    for (size_t i = 0; i < threads_.size(); i++)
        queue_.push(nullptr);
}

void ThreadPool::submit(std::function<void()> task) {
    if (!task)
        throw ContractViolation("cannot submit an empty task");
    queue_.push(std::move(task));
}

void PipelinePlan::validate() const {
    if (n < 1)
        throw ParameterError("pipeline needs n >= 1 block pairs");
    if (w < 1)
        throw ParameterError("pipeline needs w >= 1");
}

RateLimitedSource::RateLimitedSource(const SyndromeStream& stream, double tau_rd)
    : stream_(&stream), period_(std::chrono::nanoseconds(static_cast<int64_t>(std::llround(tau_rd * 1e9)))) {
    if (!(tau_rd > 0))
        throw ParameterError("rate-limited source needs tau_rd > 0");
}

int RateLimitedSource::rounds_available(Clock::time_point now) const {
    if (now < start_)
        return 0;
    auto elapsed = now - start_;
    auto rounds = elapsed / period_;
    return static_cast<int>(std::min<int64_t>(rounds, stream_->rounds));
}

Clock::time_point RateLimitedSource::arrival(int r) const {
    return start_ + period_ * (r + 1);
}

namespace {

struct BlockResult {
    size_t index = 0;
    int block = 0;
    CommitResult result;
    std::exception_ptr error;
    TaskTiming timing;
};

double since(Clock::time_point t0, Clock::time_point t) {
    return std::chrono::duration<double>(t - t0).count();
}

}  // namespace

struct Pipeline::Job {
    size_t index = 0;
    const Window* window = nullptr;
    DefectSet defects;
    TaskTiming timing;
    Clock::time_point t0;
    BlockingQueue<BlockResult>* results = nullptr;
    bool stop = false;
};

struct Pipeline::Block {
    int id = 0;
    BlockingQueue<Job> inbox;
    std::jthread thread;
};

Pipeline::Pipeline(const DecodingGraph& graph, PipelinePlan plan, const InnerDecoder& inner)
    : graph_(graph), plan_(plan), inner_(inner) {
    plan_.validate();
    for (int b = 0; b < plan_.workers(); b++) {
        auto block = std::make_unique<Block>();
        block->id = b;
        Block* self = block.get();
        block->thread = std::jthread([this, self] {
            detail::worker_index = self->id;
            while (true) {
                Job job = self->inbox.pop();
                if (job.stop)
                    return;
                BlockResult out;
                out.index = job.index;
                out.block = self->id;
                job.timing.started = since(job.t0, Clock::now());
                job.timing.worker = self->id;
                try {
                    out.result = decode_window(graph_, *job.window, job.defects, inner_);
                } catch (...) {
                    out.error = std::current_exception();
                }
                job.timing.finished = since(job.t0, Clock::now());
                out.timing = job.timing;
                job.results->push(std::move(out));
            }
        });
        blocks_.push_back(std::move(block));
    }
}

Pipeline::~Pipeline() {
    for (auto& block : blocks_) {
        Job stop;
        stop.stop = true;
        block->inbox.push(std::move(stop));
    }
}

namespace {

std::string block_name(const PipelinePlan& plan, int block) {
    return block < plan.n ? "DA_" + std::to_string(block) : "DB_" + std::to_string(block - plan.n);
}

}  // namespace

PipelineRun Pipeline::run(SyndromeSource& source) {
    const SyndromeStream& stream = source.stream();
    if (stream.defects.size() != graph_.num_detectors())
        throw ContractViolation("syndrome stream does not match the decoding graph");
    const auto t0 = Clock::now();
    source.start(t0);

    const std::vector<Window> layout = window_layout(graph_.num_rounds(), plan_.w);
    std::vector<size_t> a_windows;
    std::vector<int> ordinal(layout.size(), 0);
    int a_count = 0, b_count = 0;
    for (size_t i = 0; i < layout.size(); i++) {
        if (layout[i].layer == Layer::A) {
            ordinal[i] = a_count++;
            a_windows.push_back(i);
        } else {
            ordinal[i] = b_count++;
        }
    }

    BlockingQueue<BlockResult> results;
    std::vector<uint8_t> finished(layout.size(), 0);
    std::vector<int> waiting(layout.size(), 0);
    for (size_t i = 0; i < layout.size(); i++)
        if (layout[i].layer == Layer::B)
            waiting[i] = static_cast<int>(b_window_dependencies(layout, i).size());

    PipelineRun run;
    std::vector<uint8_t> current = stream.defects;
    std::vector<uint32_t> edges;
    std::vector<size_t> ready_b;
    size_t next_a = 0;
    size_t in_flight = 0;
    size_t received = 0;
    std::exception_ptr failure;
    std::string failure_context;

    auto send = [&](size_t index, int block, DefectSet defects) {
        Job job;
        job.index = index;
        job.window = &layout[index];
        job.defects = std::move(defects);
        job.t0 = t0;
        job.results = &results;
        job.timing.window_id = layout[index].id;
        job.timing.layer = layout[index].layer;
        job.timing.dispatched = since(t0, Clock::now());
        in_flight++;
        blocks_[block]->inbox.push(std::move(job));
    };

    while (received < layout.size()) {
        auto now = Clock::now();
        int available = source.rounds_available(now);
        if (!failure) {
            while (next_a < a_windows.size() && layout[a_windows[next_a]].rounds.end <= available) {
                size_t idx = a_windows[next_a++];
                send(idx, plan_.a_block(ordinal[idx]), defects_in_rounds(graph_, stream.defects, layout[idx].rounds));
            }
            for (auto it = ready_b.begin(); it != ready_b.end();) {
                size_t idx = *it;
                if (layout[idx].rounds.end > available) {
                    ++it;
                    continue;
                }
                bool inputs_ready = true;
                for (size_t dep : b_window_dependencies(layout, idx))
                    inputs_ready = inputs_ready && finished[dep];
                if (!inputs_ready) {
                    failure = std::make_exception_ptr(IntegrityError("B window has missing artificial-defect input"));
                    failure_context = "pipeline window " + std::to_string(layout[idx].id) + ": ";
                    break;
                }
                send(idx, plan_.b_block(ordinal[idx]), defects_in_rounds(graph_, current, layout[idx].rounds));
                it = ready_b.erase(it);
            }
        }

        std::optional<Clock::time_point> next_arrival;
        if (!failure) {
            if (next_a < a_windows.size())
                next_arrival = source.arrival(layout[a_windows[next_a]].rounds.end - 1);
            for (size_t idx : ready_b) {
                auto t = source.arrival(layout[idx].rounds.end - 1);
                if (!next_arrival || t < *next_arrival)
                    next_arrival = t;
            }
        }

        if (in_flight == 0) {
            if (failure)
                break;
            if (!next_arrival)
                throw std::logic_error("pipeline deadlock: nothing in flight and nothing left to dispatch");
            std::this_thread::sleep_until(*next_arrival);
            continue;
        }

        std::optional<BlockResult> msg;
        if (next_arrival)
            msg = results.pop_until(*next_arrival);
        else
            msg = results.pop();
        if (!msg)
            continue;

        in_flight--;
        received++;
        msg->timing.received = since(t0, Clock::now());
        run.tasks.push_back(msg->timing);
        if (msg->error) {
            if (!failure) {
                failure = msg->error;
                failure_context = "pipeline block " + block_name(plan_, msg->block) + " failed on window " +
                                  std::to_string(layout[msg->index].id) + ": ";
            }
            continue;
        }
        if (failure)
            continue;
        const Window& window = layout[msg->index];
        try {
            apply_commit(graph_, window, msg->result, current);
        } catch (...) {
            failure = std::current_exception();
            failure_context = "pipeline block " + block_name(plan_, msg->block) + " returned an inconsistent commit for window " +
                              std::to_string(window.id) + ": ";
            continue;
        }
        edges.insert(edges.end(), msg->result.committed_edges.begin(), msg->result.committed_edges.end());
        finished[msg->index] = 1;
        if (window.layer == Layer::A) {
            for (size_t b : {msg->index - 1, msg->index + 1}) {
                if (b >= layout.size() || layout[b].layer != Layer::B)
                    continue;
                if (--waiting[b] == 0)
                    ready_b.push_back(b);
            }
        }
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            throw std::runtime_error(failure_context + e.what());
        }
    }
    run.correction = make_correction(graph_, std::move(edges));
    run.wall_seconds = since(t0, Clock::now());
    return run;
}

PipelineRun run_pipeline(const DecodingGraph& graph, const SyndromeStream& stream, const PipelinePlan& plan,
                         const InnerDecoder& inner) {
    Pipeline pipeline(graph, plan, inner);
    InMemorySource source(stream);
    return pipeline.run(source);
}

BacklogVerdict check_backlog(double r_gen, double r_proc, int t_depth) {
    if (!(r_gen > 0) || !(r_proc > 0))
        throw ParameterError("check_backlog needs positive rates");
    if (t_depth < 0)
        throw ParameterError("check_backlog needs a non-negative T-depth");
    BacklogVerdict v;
    v.f = r_gen / r_proc;
    v.stable = v.f <= 1;
    v.slowdown = v.stable ? 1.0 : std::pow(v.f, t_depth);
    return v;
}

double estimate_dispatch_overhead(std::span<const TaskTiming> tasks) {
    if (tasks.empty())
        return 0;
    std::map<int, std::vector<const TaskTiming*>> by_worker;
    for (const auto& t : tasks)
        by_worker[t.worker].push_back(&t);
    double total = 0;
    for (auto& [worker, list] : by_worker) {
        std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->started < b->started; });
        double prev_finish = 0;
        for (const auto* t : list) {
            double ready = worker >= 0 ? std::max(t->dispatched, prev_finish) : t->dispatched;
            total += std::max(0.0, t->started - ready) + std::max(0.0, t->received - t->finished);
            prev_finish = t->finished;
        }
    }
    return total / static_cast<double>(tasks.size());
}

namespace {

double mean_of(std::span<const double> xs) {
    if (xs.empty())
        return 0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stderr_of(std::span<const double> xs) {
    if (xs.size() < 2)
        return 0;
    double m = mean_of(xs);
    double ss = 0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

ThroughputReport measure_throughput(const ThroughputOptions& options, const InnerDecoder& inner) {
    if (options.shots < 1)
        throw ParameterError("measure_throughput needs shots >= 1");
    if (options.workers < 1)
        throw ParameterError("measure_throughput needs workers >= 1");
    if (!(options.tau_rd > 0))
        throw ParameterError("measure_throughput needs tau_rd > 0");

    ThroughputReport report;
    report.family = options.family;
    report.d = options.distance;
    report.p = options.p;
    report.shots = options.shots;
    report.workers = options.workers;
    PipelinePlan plan{std::max(1, options.workers / 2), options.distance};
    if (options.mode == ThroughputMode::Pipeline)
        report.workers = plan.workers();
    report.rounds = options.rounds > 0 ? options.rounds : 8 * (report.workers + 1) * options.distance;

    CodeParams params{options.family, options.distance, report.rounds, options.p};
    const DecodingGraph graph = build_graph(params);
    const WindowConfig cfg = WindowConfig::parallel(options.distance);

    std::unique_ptr<ThreadPool> pool;
    std::unique_ptr<Pipeline> pipeline;
    if (options.mode == ThroughputMode::ParallelPool)
        pool = std::make_unique<ThreadPool>(static_cast<size_t>(options.workers));
    else
        pipeline = std::make_unique<Pipeline>(graph, plan, inner);

    std::vector<double> rates;
    std::vector<TaskTiming> all_tasks;
    for (int shot = 0; shot < options.shots; shot++) {
        auto err = sample_error(graph, options.p, derive_seed(options.seed, static_cast<uint64_t>(shot)));
        auto stream = extract_syndrome(graph, err);
        double seconds = 0;
        if (pool) {
            DecodeTrace trace;
            parallel_window_decode(graph, stream, cfg, inner, *pool, &trace);
            seconds = trace.wall_seconds;
            all_tasks.insert(all_tasks.end(), trace.tasks.begin(), trace.tasks.end());
            report.tau0_est += estimate_dispatch_overhead(trace.tasks) * static_cast<double>(trace.tasks.size());
        } else {
            InMemorySource source(stream);
            auto run = pipeline->run(source);
            seconds = run.wall_seconds;
            all_tasks.insert(all_tasks.end(), run.tasks.begin(), run.tasks.end());
            report.tau0_est += estimate_dispatch_overhead(run.tasks) * static_cast<double>(run.tasks.size());
        }
        report.wall_time += seconds;
        rates.push_back(report.rounds / std::max(seconds, 1e-12));
    }
    report.r_dec_mean = mean_of(rates);
    report.r_dec_stderr = stderr_of(rates);
    for (const auto& t : all_tasks)
        report.tau_w_samples.push_back(t.finished - t.started);
    report.tau_w_mean = mean_of(report.tau_w_samples);
    report.tau0_est = all_tasks.empty() ? 0 : report.tau0_est / static_cast<double>(all_tasks.size());
    const double bits = params.syndrome_bits_per_round();
    report.r_proc = report.r_dec_mean * bits;
    report.r_gen = bits / options.tau_rd;
    report.f = report.r_gen / report.r_proc;
    report.dispatch_bound = report.workers * report.tau0_est > report.tau_w_mean;
    return report;
}

SimulatedPipeline simulate_pipeline(int total_rounds, const PipelinePlan& plan, const TimingModel& timing,
                                    bool online) {
    plan.validate();
    timing.validate();
    const auto layout = window_layout(total_rounds, plan.w);
    std::vector<double> block_free(plan.workers(), 0.0);
    std::vector<double> finish(layout.size(), 0.0);
    auto arrival = [&](int end_round) { return online ? end_round * timing.tau_rd : 0.0; };

    int a_ordinal = 0, b_ordinal = 0;
    SimulatedPipeline sim;
    std::vector<std::pair<int, double>> commits;  // (commit end round, finish time)
    // A windows first in temporal order; B windows depend on neighbouring A finishes.
    for (size_t i = 0; i < layout.size(); i++) {
        if (layout[i].layer != Layer::A)
            continue;
        int block = plan.a_block(a_ordinal++);
        double start = std::max(arrival(layout[i].rounds.end), block_free[block]) + timing.tau_0;
        finish[i] = start + timing.tau_W;
        block_free[block] = finish[i];
    }
    for (size_t i = 0; i < layout.size(); i++) {
        if (layout[i].layer != Layer::B)
            continue;
        int block = plan.b_block(b_ordinal++);
        double ready = arrival(layout[i].rounds.end);
        for (size_t dep : b_window_dependencies(layout, i))
            ready = std::max(ready, finish[dep]);
        double start = std::max(ready, block_free[block]) + timing.tau_0;
        finish[i] = start + timing.tau_W;
        block_free[block] = finish[i];
    }
    for (size_t i = 0; i < layout.size(); i++) {
        bool closes_history = layout[i].layer == Layer::B || i + 1 == layout.size();
        if (!closes_history)
            continue;
        // History up to the commit end is final once this window and its predecessor are done.
        double done = finish[i];
        if (i > 0)
            done = std::max(done, finish[i - 1]);
        commits.push_back({layout[i].commit.end, done});
        sim.lag.push_back(done - layout[i].rounds.end * timing.tau_rd);
    }
    sim.makespan = *std::max_element(finish.begin(), finish.end());
    // Slope between two B commits a whole number of cycles (n B windows) apart, skipping the
    // start-up quarter and the final, possibly reduced, window.
    const size_t steady = commits.size() > 0 ? commits.size() - 1 : 0;
    const size_t cycle = static_cast<size_t>(plan.n);
    size_t i = steady / 4;
    size_t j = steady > i ? i + cycle * ((steady - 1 - i) / cycle) : i;
    if (j > i && commits[j].second > commits[i].second) {
        sim.r_dec = (commits[j].first - commits[i].first) / (commits[j].second - commits[i].second);
    } else {
        sim.r_dec = total_rounds / sim.makespan;
    }
    if (online && sim.lag.size() >= 4) {
        // Lag must not keep growing: compare the tail with the worst lag of the first half.
        double early = *std::max_element(sim.lag.begin(), sim.lag.begin() + static_cast<long>(sim.lag.size() / 2));
        double tail = sim.lag[sim.lag.size() - 2];
        sim.lag_bounded = tail <= early + 1e-12;
    }
    return sim;
}

}  // namespace parwin
