#include <gtest/gtest.h>

#include <random>

#include "oracles/pairing_oracle.h"
#include "parwin/errors.h"
#include "parwin/syndrome.h"

namespace parwin {
namespace {

TEST(Syndrome, EmptyErrorHasNoDefects) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 3, 4, 0.02});
    auto s = extract_syndrome(g, {});
    EXPECT_EQ(s.num_defects(), 0u);
    EXPECT_FALSE(s.logical_frame);
    EXPECT_EQ(s.rounds, 4);
}

TEST(Syndrome, BulkSpaceFaultGivesPairInOneRound) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 5, 3, 0.02});
    for (const auto& e : g.edges()) {
        if (g.is_boundary(e.b) || g.round_of(e.a) != g.round_of(e.b))
            continue;
        auto s = extract_syndrome(g, {{e.fault_id}, 0});
        auto ids = s.defect_ids();
        ASSERT_EQ(ids.size(), 2u);
        EXPECT_EQ(g.round_of(ids[0]), g.round_of(ids[1]));
    }
}

TEST(Syndrome, ZeroRateSamplesNothing) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 3, 4, 0.0});
    EXPECT_TRUE(sample_error(g, 0.0, 5).triggered_faults.empty());
}

TEST(Syndrome, RejectsOutOfRangeRate) {
    auto g = build_graph({CodeFamily::Repetition, 3, 2, 0.02});
    EXPECT_THROW(sample_error(g, 1.0, 1), ParameterError);
    EXPECT_THROW(sample_error(g, 0.5, 1), ParameterError);
}

TEST(Syndrome, UnknownFaultIsIntegrityError) {
    auto g = build_graph({CodeFamily::Repetition, 3, 2, 0.02});
    EXPECT_THROW(extract_syndrome(g, {{static_cast<uint32_t>(g.num_edges())}, 0}), IntegrityError);
}

TEST(Syndrome, DeterministicForSeed) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 5, 10, 0.05});
    for (uint64_t seed = 0; seed < 20; seed++) {
        auto a = sample_error(g, 0.05, seed);
        auto b = sample_error(g, 0.05, seed);
        EXPECT_EQ(a.triggered_faults, b.triggered_faults);
        EXPECT_EQ(extract_syndrome(g, a).defects, extract_syndrome(g, b).defects);
    }
    EXPECT_NE(sample_error(g, 0.05, 1).triggered_faults, sample_error(g, 0.05, 2).triggered_faults);
}

TEST(Syndrome, SampleRateMatchesP) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 7, 20, 0.1});
    size_t hits = 0, trials = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        hits += sample_error(g, 0.1, seed).triggered_faults.size();
        trials += g.num_edges();
    }
    double rate = static_cast<double>(hits) / trials;
    double sigma = std::sqrt(0.1 * 0.9 / trials);
    EXPECT_NEAR(rate, 0.1, 5 * sigma);
}

// Defect parity, linearity and agreement with an independent replay.
TEST(Syndrome, PropertiesOverRandomErrors) {
    std::mt19937_64 rng(7);
    for (auto family : {CodeFamily::Repetition, CodeFamily::RotatedPlanar}) {
        auto g = build_graph({family, 5, 8, 0.05});
        for (int trial = 0; trial < 200; trial++) {
            auto e1 = sample_error(g, 0.05, rng());
            auto e2 = sample_error(g, 0.05, rng());
            auto s1 = extract_syndrome(g, e1);
            auto s2 = extract_syndrome(g, e2);
            EXPECT_EQ(s1.defects, testing::replay_syndrome(g, e1.triggered_faults));
            EXPECT_EQ(s1.logical_frame, testing::replay_logical(g, e1.triggered_faults));

            size_t boundary_hits = 0;
            for (uint32_t f : e1.triggered_faults)
                boundary_hits += g.is_boundary(g.edge(f).b);
            EXPECT_EQ((s1.num_defects() + boundary_hits) % 2, 0u);
            EXPECT_EQ(s1.boundary_parity(), boundary_hits % 2 == 1);

            auto both = symmetric_difference(e1.triggered_faults, e2.triggered_faults);
            auto s12 = extract_syndrome(g, {both, 0});
            for (size_t v = 0; v < g.num_detectors(); v++)
                EXPECT_EQ(s12.defects[v], s1.defects[v] ^ s2.defects[v]);
            EXPECT_EQ(s12.logical_frame, s1.logical_frame != s2.logical_frame);
        }
    }
}

TEST(Syndrome, RoundSpans) {
    auto g = build_graph({CodeFamily::RotatedPlanar, 3, 5, 0.05});
    auto s = extract_syndrome(g, sample_error(g, 0.05, 3));
    size_t total = 0;
    for (int r = 0; r < s.rounds; r++) {
        EXPECT_EQ(s.round(r).size(), 4u);
        for (auto bit : s.round(r))
            total += bit;
    }
    EXPECT_EQ(total, s.num_defects());
}

}  // namespace
}  // namespace parwin
