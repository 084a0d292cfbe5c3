#include <gtest/gtest.h>

#include <random>

#include "parwin/errors.h"
#include "parwin/resources.h"

namespace parwin {
namespace {

TEST(MinWorkers, EqualityBoundaryGivesOne) {
    auto cfg = WindowConfig::parallel(5);
    // 2 tau_W = (n_com + n_W) tau_rd = 20 tau_rd.
    EXPECT_EQ(min_workers(cfg, {1e-6, 10e-6, 0}), 1);
}

TEST(MinWorkers, DistanceTenExample) {
    EXPECT_EQ(min_workers(WindowConfig::parallel(10), {1e-6, 200e-6, 0}), 10);
}

TEST(MinWorkers, RejectsInvalidInputs) {
    EXPECT_THROW(min_workers(WindowConfig::parallel(5), {0, 1e-4, 0}), ParameterError);
    EXPECT_THROW(min_workers(WindowConfig::parallel(5), {1e-6, -1, 0}), ParameterError);
    EXPECT_THROW(min_workers(WindowConfig::sliding(5, 3), {1e-6, 1e-4, 0}), ParameterError);
}

TEST(MinWorkers, LeastIntegerSatisfyingAcquisitionBound) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> width(1, 40);
    std::uniform_real_distribution<double> log_rd(-8, -4), log_w(-7, -1);
    for (int i = 0; i < 10000; i++) {
        auto cfg = WindowConfig::parallel(width(rng));
        TimingModel t{std::pow(10.0, log_rd(rng)), std::pow(10.0, log_w(rng)), 0};
        int n = min_workers(cfg, t);
        ASSERT_GE(n, 1);
        const double lhs = n * 4.0 * cfg.w * t.tau_rd;
        ASSERT_GE(lhs, 2 * t.tau_W * (1 - 1e-9));
        ASSERT_TRUE(acquisition_covers_decoding(n, cfg, t));
        if (n > 1) {
            ASSERT_LT((n - 1) * 4.0 * cfg.w * t.tau_rd, 2 * t.tau_W);
            ASSERT_FALSE(acquisition_covers_decoding(n - 1, cfg, t));
        }
        auto plan = response_time(cfg, t, cfg.w);
        const double span = 4.0 * cfg.w * t.tau_rd;
        ASSERT_GE(plan.tau, 2 * t.tau_W * (1 - 1e-9));
        if (plan.N_par > 1)
            ASSERT_LT(plan.tau, 2 * t.tau_W + span);
        ASSERT_EQ(plan.n_lag, static_cast<long long>(plan.N_par) * 4 * cfg.w);
        ASSERT_DOUBLE_EQ(plan.tau, plan.n_lag * t.tau_rd);
    }
}

TEST(MinWorkers, Monotone) {
    auto cfg = WindowConfig::parallel(7);
    int prev = 0;
    for (double tau_w = 1e-6; tau_w < 1e-2; tau_w *= 1.37) {
        int n = min_workers(cfg, {1e-6, tau_w, 0});
        EXPECT_GE(n, prev);
        prev = n;
    }
    prev = INT32_MAX;
    for (double tau_rd = 1e-8; tau_rd < 1e-4; tau_rd *= 1.41) {
        int n = min_workers(cfg, {tau_rd, 1e-4, 0});
        EXPECT_LE(n, prev);
        prev = n;
    }
}

TEST(ResponseTime, VanishingDecodeTimeUsesOneWorker) {
    auto cfg = WindowConfig::parallel(5);
    auto plan = response_time(cfg, {1e-6, 1e-15, 0}, 5);
    EXPECT_EQ(plan.N_par, 1);
    EXPECT_NEAR(plan.tau, 20e-6, 1e-18);
    EXPECT_NEAR(plan.tau_clock, 25e-6, 1e-18);
}

TEST(ResponseTime, ClockAndAuxiliaryQubits) {
    auto plan = response_time(WindowConfig::parallel(10), {1e-6, 200e-6, 0}, 10);
    EXPECT_EQ(plan.N_par, 10);
    EXPECT_EQ(plan.n_lag, 400);
    EXPECT_NEAR(plan.tau, 400e-6, 1e-15);
    EXPECT_NEAR(plan.tau_clock, 410e-6, 1e-15);
    EXPECT_EQ(plan.aux_qubits, 40);
    EXPECT_THROW(response_time(WindowConfig::parallel(10), {1e-6, 200e-6, 0}, 10, 0), ParameterError);
}

TEST(Overhead, TenfoldClockExample) {
    const int d = 25;
    const double tau_rd = 1e-6;
    // tau_clock = d tau_rd + tau = 10 d tau_rd.
    const double tau = 9 * d * tau_rd;
    auto r = overhead_report(tau, d, tau_rd, 100, 1);
    EXPECT_EQ(r.aux_qubits, 9);
    EXPECT_DOUBLE_EQ(r.qubit_factor, 1.09);
    EXPECT_NEAR(r.time_factor, 10.0, 1e-12);
}

TEST(Overhead, TotalResponseIsLinearInDepth) {
    for (int k = 0; k <= 50; k++) {
        auto r = overhead_report(3e-5, 9, 1e-6, 10, k);
        EXPECT_NEAR(r.total_response, k * 3e-5, 1e-15);
    }
    EXPECT_THROW(overhead_report(1e-5, 9, 1e-6, 0, 1), ParameterError);
}

TEST(AuxiliaryQubits, CeilingIgnoresRoundingNoise) {
    EXPECT_EQ(auxiliary_qubits(0.1 * 3 * 1e-6 * 30, 3, 1e-6), 3);
    EXPECT_EQ(auxiliary_qubits(3.0000001e-6, 1, 1e-6), 4);
    EXPECT_EQ(auxiliary_qubits(0, 5, 1e-6), 0);
}

}  // namespace
}  // namespace parwin
