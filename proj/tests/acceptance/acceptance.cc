// Acceptance checks. Each criterion prints one PASS or FAIL line; details are indented.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harness/harness.h"
#include "parwin/decoders.h"
#include "parwin/errors.h"
#include "parwin/resources.h"
#include "parwin/rng.h"
#include "parwin/scheduler.h"
#include "parwin/syndrome.h"
#include "parwin/tiling.h"
#include "parwin/window_view.h"
#include "parwin/windowing.h"

namespace parwin {
namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
};

template <typename... Args>
void detail(const char* fmt, Args... args) {
    std::printf("  ");
    std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

bool same_syndrome(const DecodingGraph& graph, const Correction& c, const SyndromeStream& stream) {
    return syndrome_of(graph, c.edges) == stream.defects;
}

Outcome fidelity_equivalence(const std::string& mode) {
    harness::ExperimentConfig cfg;
    cfg.distances = {3, 5, 7};
    cfg.p = 0.02;
    cfg.rounds = {harness::RoundsRule::parse("4d"), harness::RoundsRule::parse("8d")};
    cfg.shots = 10000;
    cfg.seed = 20230601;
    cfg.decoder = "uf";
    cfg.modes = {"global", mode};
    int cells = 0, within = 0;
    for (const auto& r : harness::run_fidelity(cfg)) {
        if (r["mode"] == "global") {
            detail("d=%d rounds=%d global LER=%.5f +- %.5f", r["d"].get<int>(), r["rounds"].get<int>(),
                   r["logical_error_rate"].get<double>(), r["stderr"].get<double>());
            continue;
        }
        cells++;
        bool ok = r["within_2sigma"].get<bool>();
        within += ok;
        detail("d=%d rounds=%d %s LER=%.5f paired diff=%+.5f sigma=%.5f %s", r["d"].get<int>(),
               r["rounds"].get<int>(), mode.c_str(), r["logical_error_rate"].get<double>(),
               r["paired_diff"].get<double>(), r["paired_sigma"].get<double>(), ok ? "ok" : "outside 2 sigma");
    }
    return {within == cells, std::to_string(within) + "/" + std::to_string(cells) + " cells within 2 sigma of global"};
}

Outcome criterion1() {
    return fidelity_equivalence("parallel");
}

Outcome criterion2() {
    return fidelity_equivalence("sliding");
}

double measured_r_dec(int d, int workers, int shots) {
    UnionFindDecoder uf;
    ThroughputOptions opt;
    opt.distance = d;
    opt.p = 0.02;
    opt.workers = workers;
    opt.shots = shots;
    opt.seed = 7;
    auto rep = measure_throughput(opt, uf);
    detail("d=%d workers=%d rounds=%d r_dec=%.4g +- %.3g rounds/s tau_W=%.3gs tau0=%.3gs%s", d, workers, rep.rounds,
           rep.r_dec_mean, rep.r_dec_stderr, rep.tau_w_mean, rep.tau0_est,
           rep.dispatch_bound ? " dispatch-bound" : "");
    return rep.r_dec_mean;
}

Outcome criterion3() {
    detail("hardware threads: %u", std::thread::hardware_concurrency());
    bool pass = true;
    std::string summary;
    for (int d : {3, 9, 13}) {
        std::map<int, double> rate;
        for (int workers : {1, 2, 4, 8})
            rate[workers] = measured_r_dec(d, workers, 5);
        bool monotone = rate[2] >= rate[1] && rate[4] >= rate[2] && rate[8] >= rate[4];
        double speedup = rate[8] / rate[1];
        detail("d=%d speedup(8 vs 1)=%.2fx monotone=%s", d, speedup, monotone ? "yes" : "no");
        if (d == 3) {
            detail("%s", "d=3 reported only (sub-linear scaling permitted)");
            continue;
        }
        pass = pass && monotone && speedup >= 4.0;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%sd=%d %.2fx%s", summary.empty() ? "" : ", ", d, speedup,
                      monotone ? "" : " non-monotone");
        summary += buf;
    }
    return {pass, summary + " (need >= 4x and monotone)"};
}

Outcome criterion4() {
    const int workers = 1;
    double prev = INFINITY;
    bool pass = true;
    for (int d = 5; d <= 17; d += 2) {
        double r = measured_r_dec(d, workers, 40);
        if (!(r < prev))
            pass = false;
        prev = r;
    }
    return {pass, "r_dec strictly decreasing over d=5..17 at workers=1"};
}

Outcome criterion5() {
    UnionFindDecoder uf;
    ThreadPool pool(2);
    const int total_shots = 100000;
    long violations = 0, shots = 0;
    for (int d : {3, 5}) {
        const int rounds = 4 * d;
        auto graph = build_graph({CodeFamily::RotatedPlanar, d, rounds, 0.02});
        Pipeline pipeline(graph, PipelinePlan{2, d}, uf);
        long cell_violations = 0;
        for (int s = 0; s < total_shots / 2; s++, shots++) {
            auto stream = extract_syndrome(graph, sample_error(graph, 0.02, derive_seed(500 + d, s)));
            std::vector<std::function<Correction()>> modes{
                [&] { return global_decode(graph, stream, uf); },
                [&] { return sliding_window_decode(graph, stream, WindowConfig::sliding(d, d), uf); },
                [&] { return parallel_window_decode(graph, stream, WindowConfig::parallel(d), uf, pool); },
                [&] {
                    InMemorySource source(stream);
                    return pipeline.run(source).correction;
                }};
            for (auto& decode : modes) {
                try {
                    cell_violations += !same_syndrome(graph, decode(), stream);
                } catch (const std::exception& e) {
                    cell_violations++;
                    detail("d=%d shot=%d raised: %s", d, s, e.what());
                }
            }
        }
        detail("d=%d rounds=%d shots=%d violations=%ld over 4 modes", d, rounds, total_shots / 2, cell_violations);
        violations += cell_violations;
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(shots) +
                                 " shots x {global, sliding, parallel, pipeline}"};
}

Outcome criterion6() {
    std::mt19937_64 rng(606);
    long violations = 0, strictly_better = 0;
    int windows = 0;
    while (windows < 1000) {
        CodeFamily family = rng() % 2 ? CodeFamily::RotatedPlanar : CodeFamily::Repetition;
        int d = rng() % 2 ? 3 : 5;
        int rounds = 1 + static_cast<int>(rng() % (3 * d));
        double p = std::uniform_real_distribution<double>(0.005, 0.06)(rng);
        auto graph = build_graph({family, d, rounds, p});
        int begin = static_cast<int>(rng() % rounds);
        int end = begin + 1 + static_cast<int>(rng() % (rounds - begin));
        Window window{0, {begin, end}, {begin, end}, Layer::Sliding,
                      begin == 0 || rng() % 2 ? TimeBoundary::Smooth : TimeBoundary::Rough,
                      end == rounds || rng() % 2 ? TimeBoundary::Smooth : TimeBoundary::Rough};
        auto stream = extract_syndrome(graph, sample_error(graph, p, rng()));
        auto defects = defects_in_rounds(graph, stream.defects, window.rounds);
        if (defects.vertex_ids.size() > 14)
            continue;
        windows++;
        WindowView view(graph, window);
        auto exact = exact_pairing_oracle(view, defects);
        auto approx = uf_decode(view, defects);
        double we = correction_weight(exact, graph), wu = correction_weight(approx, graph);
        bool ok = is_valid_correction(view, defects, exact) && is_valid_correction(view, defects, approx) &&
                  we <= wu * (1 + 1e-12) + 1e-12;
        violations += !ok;
        strictly_better += we < wu - 1e-9;
    }
    detail("random windows=%d violations=%ld oracle strictly lighter in %ld", windows, violations, strictly_better);

    PairingOracleDecoder oracle;
    long single_errors = 0, invalid = 0, double_logical = 0, cases = 0;
    for (CodeFamily family : {CodeFamily::RotatedPlanar, CodeFamily::Repetition}) {
        auto graph = build_graph({family, 3, 3, 0.02});
        const uint32_t m = static_cast<uint32_t>(graph.num_edges());
        auto check = [&](std::vector<uint32_t> faults) {
            SyndromeStream stream = extract_syndrome(graph, {faults});
            auto c = global_decode(graph, stream, oracle);
            cases++;
            invalid += !same_syndrome(graph, c, stream);
            return c.logical_flip != logical_parity(graph, faults);
        };
        long family_double = 0;
        single_errors += check({});
        for (uint32_t a = 0; a < m; a++) {
            single_errors += check({a});
            for (uint32_t b = a + 1; b < m; b++)
                family_double += check({a, b});
        }
        double_logical += family_double;
        detail("%s d=3 rounds=3 edges=%u: weight-2 fault sets with logical error=%ld (permitted)",
               to_string(family).c_str(), m, family_double);
    }
    detail("exhaustive d=3: %ld fault sets, invalid=%ld, weight<=1 logical errors=%ld", cases, invalid, single_errors);
    bool pass = violations == 0 && invalid == 0 && single_errors == 0;
    return {pass, std::to_string(violations) + " random-window violations, " + std::to_string(single_errors) +
                      " weight<=1 logical errors, " + std::to_string(invalid) + " invalid exhaustive corrections"};
}

Outcome criterion7() {
    const int d = 3;
    PairingOracleDecoder oracle;
    InlineExecutor inline_exec;
    long errors = 0, cases = 0;
    for (CodeFamily family : {CodeFamily::RotatedPlanar, CodeFamily::Repetition}) {
        for (int rounds = 1; rounds <= 8 * d; rounds++) {
            auto graph = build_graph({family, d, rounds, 0.02});
            for (uint32_t f = 0; f <= graph.num_edges(); f++) {
                std::vector<uint32_t> faults;
                if (f < graph.num_edges())
                    faults.push_back(f);
                SyndromeStream stream = extract_syndrome(graph, {faults});
                auto c = parallel_window_decode(graph, stream, WindowConfig::parallel(d), oracle, inline_exec);
                cases++;
                errors += c.logical_flip != logical_parity(graph, faults) || !same_syndrome(graph, c, stream);
            }
        }
    }
    detail("d=3 w=3 rounds 1..24, both families: %ld fault sets of weight <= 1", cases);
    return {errors == 0, std::to_string(errors) + " logical errors for weight <= 1 faults"};
}

Outcome criterion8() {
    // tau_clock = 10 d tau_rd: d = 12, w = 9 and three workers give n_lag = 108 = 9 d.
    const double tau_rd = 1e-6;
    const int d = 12;
    auto cfg = WindowConfig::parallel(9);
    TimingModel timing{tau_rd, 50 * tau_rd, 0};
    int n = min_workers(cfg, timing);
    auto plan = response_time(cfg, timing, d);
    auto report = overhead_report(plan, d, tau_rd, 100, 1);
    detail("min_workers=%d n_lag=%lld tau_clock/(d tau_rd)=%.6f aux=%lld qubit factor=%.6f time factor=%.6f", n,
           plan.n_lag, plan.tau_clock / (d * tau_rd), report.aux_qubits, report.qubit_factor, report.time_factor);
    bool example = n == 3 && plan.n_lag == 108 && std::abs(plan.tau_clock - 10 * d * tau_rd) < 1e-15 &&
                   report.aux_qubits == 9 && report.qubit_factor == 1.09 && std::abs(report.time_factor - 10) < 1e-12;

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> width(1, 50);
    std::uniform_real_distribution<double> log_rd(-8, -4), log_w(-7, -1);
    long violations = 0;
    for (int i = 0; i < 10000; i++) {
        auto c = WindowConfig::parallel(width(rng));
        TimingModel t{std::pow(10.0, log_rd(rng)), std::pow(10.0, log_w(rng)), 0};
        int workers = min_workers(c, t);
        double span = (c.n_com + c.parallel_window_rounds()) * t.tau_rd;
        bool holds = workers * span >= 2 * t.tau_W * (1 - 1e-9);
        bool least = workers == 1 || (workers - 1) * span < 2 * t.tau_W;
        violations += !(holds && least);
    }
    detail("10000 random draws: %ld violations of N (n_com + n_W) tau_rd >= 2 tau_W with N minimal", violations);
    return {example && violations == 0, std::string("worked example ") + (example ? "exact" : "mismatch") + ", " +
                                            std::to_string(violations) + " inequality violations"};
}

Outcome criterion9() {
    UnionFindDecoder uf;
    InlineExecutor inline_exec;
    long mismatches = 0, shots = 0;
    for (int n : {1, 2, 4}) {
        std::mt19937_64 rng(900 + n);
        long cell = 0;
        for (int s = 0; s < 1000; s++, shots++) {
            int d = s % 2 ? 5 : 3;
            int rounds = 1 + static_cast<int>(rng() % (12 * d));
            auto graph = build_graph({CodeFamily::RotatedPlanar, d, rounds, 0.02});
            auto stream = extract_syndrome(graph, sample_error(graph, 0.02, derive_seed(n, s)));
            try {
                auto reference = parallel_window_decode(graph, stream, WindowConfig::parallel(d), uf, inline_exec);
                auto piped = run_pipeline(graph, stream, PipelinePlan{n, d}, uf).correction;
                cell += !(piped == reference);
            } catch (const std::exception& e) {
                cell++;
                detail("n=%d shot=%d raised: %s", n, s, e.what());
            }
        }
        detail("n=%d: 1000 shots, %ld mismatches", n, cell);
        mismatches += cell;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(shots) + " shots"};
}

Outcome criterion10() {
    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> extent(4, 30);
    std::uniform_real_distribution<double> cell(1.2, 5.0);
    const int order[] = {0, 1, 2};
    int valid = 0, rough_c = 0, c_regions = 0;
    for (int trial = 0; trial < 10; trial++) {
        int wdt = extent(rng), hgt = extent(rng);
        double s = cell(rng);
        auto base = color_hex_2d(wdt, hgt, s);
        for (const auto& p : {base, extrude(base, 1 + static_cast<int>(rng() % 6))}) {
            auto check = validate_coloring(p);
            bool ok = check.valid && check.edges_partitioned && check.min_same_color_separation >= p.interaction_radius;
            valid += ok;
            int layer_c = 0, rough = 0;
            for (const auto& b : assign_boundaries(p, order)) {
                if (p.regions[b.region].color != 2)
                    continue;
                layer_c++;
                rough += b.rough_faces();
            }
            c_regions += layer_c;
            rough_c += rough;
            detail("extent %dx%d%s cell=%.3f regions=%zu colours=%d separation=%.3f radius=%.3f C regions=%d "
                   "C rough faces=%d %s",
                   wdt, hgt, p.graph.points.size() == base.graph.points.size() ? "" : " (extruded)", s,
                   p.regions.size(), p.num_colors(), check.min_same_color_separation, p.interaction_radius, layer_c,
                   rough, ok ? "valid" : check.message.c_str());
        }
    }
    return {valid == 20 && rough_c == 0 && c_regions > 0,
            std::to_string(valid) + "/20 colourings valid, " + std::to_string(rough_c) + " rough faces on " +
                std::to_string(c_regions) + " layer-C regions"};
}

const std::vector<std::pair<const char*, Outcome (*)()>> kCriteria{
    {"fidelity: parallel window matches global decoding", criterion1},
    {"fidelity: sliding window matches global decoding", criterion2},
    {"throughput grows with workers", criterion3},
    {"decoding frequency falls with code size", criterion4},
    {"corrections reproduce the syndrome in every mode", criterion5},
    {"exact pairing never heavier than union-find", criterion6},
    {"parallel windows preserve distance", criterion7},
    {"resource formulas", criterion8},
    {"pipeline equals parallel window decoding", criterion9},
    {"hexagonal three-colouring", criterion10},
};

}  // namespace
}  // namespace parwin

int main(int argc, char** argv) {
    CLI::App app{"parwin acceptance checks"};
    std::vector<int> selected;
    app.add_option("-c,--criterion", selected, "Criteria to run (default: all)")
        ->check(CLI::Range(1, static_cast<int>(parwin::kCriteria.size())));
    CLI11_PARSE(app, argc, argv);
    if (selected.empty())
        for (size_t i = 1; i <= parwin::kCriteria.size(); i++)
            selected.push_back(static_cast<int>(i));

    int failed = 0;
    for (int id : selected) {
        const auto& [name, run] = parwin::kCriteria[id - 1];
        std::printf("criterion %d: %s\n", id, name);
        std::fflush(stdout);
        parwin::Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out = {false, std::string("raised: ") + e.what()};
        }
        std::printf("%s criterion %d: %s\n", out.pass ? "PASS" : "FAIL", id, out.summary.c_str());
        std::fflush(stdout);
        failed += !out.pass;
    }
    return failed == 0 ? 0 : 1;
}
