#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "oracles/pairing_oracle.h"
#include "parwin/errors.h"
#include "parwin/scheduler.h"

namespace parwin {
namespace {

TEST(ThreadPool, RunsAllTasksAndTagsWorkers) {
    ThreadPool pool(3);
    EXPECT_EQ(pool.concurrency(), 3u);
    std::atomic<int> count = 0;
    std::atomic<bool> tagged = true;
    BlockingQueue<int> done;
    for (int i = 0; i < 100; i++)
        pool.submit([&] {
            count++;
            if (current_worker_index() < 0 || current_worker_index() >= 3)
                tagged = false;
            done.push(1);
        });
    for (int i = 0; i < 100; i++)
        done.pop();
    EXPECT_EQ(count, 100);
    EXPECT_TRUE(tagged);
    EXPECT_EQ(current_worker_index(), -1);
}

TEST(PipelinePlan, BlockAssignment) {
    PipelinePlan plan{4, 3};
    EXPECT_EQ(plan.workers(), 8);
    EXPECT_EQ(plan.a_block(5), 1);
    EXPECT_EQ(plan.b_block(5), 5);
    EXPECT_EQ(plan.b_predecessor_blocks(3), (std::array<int, 2>{3, 0}));
    EXPECT_THROW((PipelinePlan{0, 3}).validate(), ParameterError);
    EXPECT_THROW((PipelinePlan{1, 0}).validate(), ParameterError);
}

TEST(Pipeline, AllZeroStream) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 3, 24, 0.02});
    auto s = extract_syndrome(g, {});
    UnionFindDecoder uf;
    auto run = run_pipeline(g, s, {1, 3}, uf);
    EXPECT_TRUE(run.correction.edges.empty());
    EXPECT_EQ(run.tasks.size(), window_layout(24, 3).size());
}

TEST(Pipeline, MatchesParallelWindowDecode) {
    UnionFindDecoder uf;
    InlineExecutor exec;
    std::mt19937_64 rng(17);
    for (int n : {1, 2, 3}) {
        for (int rounds : {5, 30, 61}) {
            auto g = build_graph({CodeFamily::RotatedPlanar, 3, rounds, 0.04});
            Pipeline pipeline(g, {n, 3}, uf);
            for (int shot = 0; shot < 15; shot++) {
                auto s = extract_syndrome(g, sample_error(g, 0.04, rng()));
                InMemorySource source(s);
                auto run = pipeline.run(source);
                EXPECT_EQ(run.correction, parallel_window_decode(g, s, WindowConfig::parallel(3), uf, exec));
                EXPECT_EQ(testing::replay_syndrome(g, run.correction.edges), s.defects);
            }
        }
    }
}

TEST(Pipeline, TasksRunOnAssignedBlocks) {
    auto g = build_graph({CodeFamily::Repetition, 3, 100, 0.05});
    auto s = extract_syndrome(g, sample_error(g, 0.05, 4));
    UnionFindDecoder uf;
    PipelinePlan plan{2, 3};
    auto run = run_pipeline(g, s, plan, uf);
    auto layout = window_layout(100, 3);
    int a = 0, b = 0;
    std::vector<int> expected(layout.size());
    for (size_t i = 0; i < layout.size(); i++)
        expected[i] = layout[i].layer == Layer::A ? plan.a_block(a++) : plan.b_block(b++);
    ASSERT_EQ(run.tasks.size(), layout.size());
    for (const auto& t : run.tasks)
        EXPECT_EQ(t.worker, expected[t.window_id]);
}

TEST(Pipeline, RateLimitedSourceMatchesInMemory) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 3, 40, 0.03});
    auto s = extract_syndrome(g, sample_error(g, 0.03, 8));
    UnionFindDecoder uf;
    Pipeline pipeline(g, {2, 3}, uf);
    RateLimitedSource slow(s, 20e-6);
    InMemorySource fast(s);
    auto a = pipeline.run(slow);
    auto b = pipeline.run(fast);
    EXPECT_EQ(a.correction, b.correction);
    // Nothing can finish before the data of its last round arrived.
    EXPECT_GE(a.wall_seconds, 39 * 20e-6);
}

TEST(Pipeline, WorkerFailureAbortsWithDiagnostic) {
    struct FailOnB final : InnerDecoder {
        Correction decode(const WindowView& view, const DefectSet& defects) const override {
            if (view.window().layer == Layer::B)
                throw std::runtime_error("boom");
            return uf_decode(view, defects);
        }
        std::string name() const override {
            return "fail-on-b";
        }
    };
    auto g = build_graph({CodeFamily::Repetition, 3, 60, 0.05});
    auto s = extract_syndrome(g, sample_error(g, 0.05, 2));
    try {
        run_pipeline(g, s, {2, 3}, FailOnB{});
        FAIL() << "expected failure";
    } catch (const std::exception& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("DB_"), std::string::npos) << msg;
        EXPECT_NE(msg.find("boom"), std::string::npos) << msg;
    }
}

TEST(Backlog, Verdicts) {
    auto eq = check_backlog(5, 5, 10);
    EXPECT_TRUE(eq.stable);
    EXPECT_DOUBLE_EQ(eq.f, 1);
    auto slow = check_backlog(2, 1, 10);
    EXPECT_FALSE(slow.stable);
    EXPECT_DOUBLE_EQ(slow.f, 2);
    EXPECT_DOUBLE_EQ(slow.slowdown, 1024);
    EXPECT_THROW(check_backlog(0, 1, 1), ParameterError);
}

TEST(DispatchOverhead, SubtractsQueueingBehindSameWorker) {
    std::vector<TaskTiming> tasks{
        {0, Layer::A, 0.0, 0.1, 1.0, 1.2, 0},
        {1, Layer::A, 0.0, 1.1, 2.0, 2.1, 0},
    };
    // First: 0.1 + 0.2; second waits for the worker until 1.0, so 0.1 + 0.1.
    EXPECT_NEAR(estimate_dispatch_overhead(tasks), 0.25, 1e-12);
    EXPECT_EQ(estimate_dispatch_overhead({}), 0);
}

TEST(SimulatedPipeline, WorkersFromMinWorkersKeepUp) {
    for (int w : {3, 5, 9}) {
        for (double tau_w : {5e-6, 40e-6, 300e-6}) {
            auto cfg = WindowConfig::parallel(w);
            TimingModel t{1e-6, tau_w, 0};
            const int n_par = min_workers(cfg, t);
            PipelinePlan plan{(n_par + 1) / 2, w};
            const int rounds = 8 * (n_par + 1) * w * 4;
            auto sim = simulate_pipeline(rounds, plan, t, true);
            EXPECT_TRUE(sim.lag_bounded) << "w=" << w << " tau_W=" << tau_w;
            auto offline = simulate_pipeline(rounds, plan, t, false);
            auto verdict = check_backlog(1 / t.tau_rd, offline.r_dec, 10);
            EXPECT_TRUE(verdict.stable) << "w=" << w << " tau_W=" << tau_w << " f=" << verdict.f << " n=" << plan.n << " npar=" << n_par;
        }
    }
}

TEST(SimulatedPipeline, TooFewWorkersFallBehind) {
    auto cfg = WindowConfig::parallel(5);
    TimingModel t{1e-6, 300e-6, 0};
    ASSERT_GT(min_workers(cfg, t), 4);
    auto sim = simulate_pipeline(4000, {1, 5}, t, true);
    EXPECT_FALSE(sim.lag_bounded);
    auto offline = simulate_pipeline(4000, {1, 5}, t, false);
    EXPECT_FALSE(check_backlog(1 / t.tau_rd, offline.r_dec, 1).stable);
}

TEST(SimulatedPipeline, OfflineRateScalesWithBlocks) {
    TimingModel t{1e-6, 100e-6, 0};
    auto one = simulate_pipeline(2000, {1, 5}, t, false);
    auto four = simulate_pipeline(2000, {4, 5}, t, false);
    EXPECT_NEAR(four.r_dec / one.r_dec, 4.0, 0.5);
}

TEST(Throughput, SingleShotReport) {
    ThroughputOptions opt;
    opt.distance = 3;
    opt.p = 0.0;
    opt.workers = 1;
    opt.shots = 1;
    UnionFindDecoder uf;
    auto r = measure_throughput(opt, uf);
    EXPECT_EQ(r.rounds, 8 * 2 * 3);
    EXPECT_GT(r.r_dec_mean, 0);
    EXPECT_TRUE(std::isfinite(r.r_dec_mean));
    EXPECT_DOUBLE_EQ(r.r_proc, r.r_dec_mean * 8);
    EXPECT_DOUBLE_EQ(r.f, r.r_gen / r.r_proc);
    opt.mode = ThroughputMode::Pipeline;
    opt.workers = 2;
    opt.shots = 2;
    auto p = measure_throughput(opt, uf);
    EXPECT_GT(p.r_dec_mean, 0);
    EXPECT_EQ(p.shots, 2);
}

}  // namespace
}  // namespace parwin
