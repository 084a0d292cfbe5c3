// parwin: windowed decoding experiments from the command line.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "harness/harness.h"
#include "parwin/decoding_graph.h"
#include "parwin/errors.h"
#include "parwin/tiling.h"
#include "parwin/windowing.h"

namespace {

using namespace parwin;
using namespace parwin::harness;

struct ExperimentFlags {
    std::string config;
    std::string family;
    std::vector<int> distances;
    double p = 0;
    std::vector<std::string> rounds;
    int shots = 0;
    std::vector<int> workers;
    int w = 0, n_com = 0, n_buf = 0;
    uint64_t seed = 0;
    std::string decoder;
    std::vector<std::string> modes;
    std::string throughput_mode;
    double tau_rd = 0;
    std::string output;
    std::string csv;
};

struct ExperimentOptions {
    ExperimentFlags flags;
    CLI::App* app = nullptr;
};

void add_experiment_flags(CLI::App* sub, ExperimentOptions& o) {
    auto& f = o.flags;
    o.app = sub;
    sub->add_option("-c,--config", f.config, "Flat key = value config file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--family", f.family, "repetition or rotated_planar");
    sub->add_option("-d,--distance", f.distances, "Code distances")->delimiter(',');
    sub->add_option("-p,--p", f.p, "Physical error rate");
    sub->add_option("-r,--rounds", f.rounds, "Rounds per shot, absolute (24) or per distance (8d)")->delimiter(',');
    sub->add_option("-s,--shots", f.shots, "Shots per cell");
    sub->add_option("-j,--workers", f.workers, std::string("Worker counts (env ") + kWorkersEnv + ")")->delimiter(',');
    sub->add_option("--w", f.w, "Parallel window unit (default d)");
    sub->add_option("--n-com", f.n_com, "Sliding commit rounds (default d)");
    sub->add_option("--n-buf", f.n_buf, "Sliding buffer rounds (default d)");
    sub->add_option("--seed", f.seed, "Base seed");
    sub->add_option("--decoder", f.decoder, "uf, uf-full-edge or exact");
    sub->add_option("--modes", f.modes, "global,sliding,parallel,pipeline")->delimiter(',');
    sub->add_option("--throughput-mode", f.throughput_mode, "parallel or pipeline");
    sub->add_option("--tau-rd", f.tau_rd, "Seconds per QEC round used for r_gen");
    sub->add_option("-o,--output", f.output, "JSON lines output file (default stdout)");
    sub->add_option("--csv", f.csv, "Also write records as CSV");
}

bool given(const ExperimentOptions& o, const char* name) {
    return o.app->get_option(name)->count() > 0;
}

// Defaults, then the config file, then the environment, then flags.
ExperimentConfig resolve(const ExperimentOptions& o, ExperimentConfig cfg) {
    const auto& f = o.flags;
    if (!f.config.empty())
        apply_config(cfg, read_config_file(f.config));
    if (auto env = workers_from_env())
        cfg.workers = *env;
    if (given(o, "--family"))
        cfg.family = parse_code_family(f.family);
    if (given(o, "--distance"))
        cfg.distances = f.distances;
    if (given(o, "--p"))
        cfg.p = f.p;
    if (given(o, "--rounds")) {
        cfg.rounds.clear();
        for (const auto& r : f.rounds)
            cfg.rounds.push_back(RoundsRule::parse(r));
    }
    if (given(o, "--shots"))
        cfg.shots = f.shots;
    if (given(o, "--workers"))
        cfg.workers = f.workers;
    if (given(o, "--w"))
        cfg.w = f.w;
    if (given(o, "--n-com"))
        cfg.n_com = f.n_com;
    if (given(o, "--n-buf"))
        cfg.n_buf = f.n_buf;
    if (given(o, "--seed"))
        cfg.seed = f.seed;
    if (given(o, "--decoder"))
        cfg.decoder = f.decoder;
    if (given(o, "--modes"))
        cfg.modes = f.modes;
    if (given(o, "--throughput-mode"))
        cfg.throughput_mode = f.throughput_mode;
    if (given(o, "--tau-rd"))
        cfg.tau_rd = f.tau_rd;
    if (given(o, "--output"))
        cfg.output = f.output;
    if (given(o, "--csv"))
        cfg.csv = f.csv;
    cfg.validate();
    return cfg;
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& file) {
    if (path.empty() || path == "-")
        return std::cout;
    file = std::make_unique<std::ofstream>(path);
    if (!*file)
        throw std::runtime_error("cannot write '" + path + "'");
    return *file;
}

void emit(const ExperimentConfig& cfg, const std::vector<Record>& records) {
    std::unique_ptr<std::ofstream> file;
    write_json_lines(open_output(cfg.output, file), records);
    if (!cfg.csv.empty()) {
        std::ofstream csv(cfg.csv);
        if (!csv)
            throw std::runtime_error("cannot write '" + cfg.csv + "'");
        write_csv(csv, records);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sliding and parallel window decoding experiments"};
    app.require_subcommand(1);

    ExperimentOptions fidelity;
    add_experiment_flags(app.add_subcommand("fidelity", "Logical error rate of global, sliding and parallel decoding"),
                         fidelity);
    ExperimentOptions throughput;
    add_experiment_flags(app.add_subcommand("throughput", "Decoding frequency against worker count"), throughput);

    auto* plan_cmd = app.add_subcommand("plan", "Worker count, response time and qubit overhead");
    PlanInputs plan;
    int plan_n_par = 0;
    plan_cmd->add_option("-d,--distance", plan.distance, "Code distance")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--w", plan.w, "Window unit (default d)");
    plan_cmd->add_option("--tau-rd", plan.tau_rd, "Seconds per QEC round");
    plan_cmd->add_option("--tau-w", plan.tau_W, "Seconds per window decode");
    plan_cmd->add_option("--tau-0", plan.tau_0, "Dispatch overhead seconds");
    plan_cmd->add_option("--n-par", plan_n_par, "Fix the worker count instead of the minimum");
    plan_cmd->add_option("--logical-qubits", plan.logical_qubits, "Logical qubits in the algorithm");
    plan_cmd->add_option("--t-depth", plan.t_depth, "Sequential T layers");

    auto* export_cmd = app.add_subcommand("export-graph", "Write the decoding graph and window layouts as text");
    std::string ex_family = "rotated_planar", ex_graph, ex_layout;
    int ex_d = 3, ex_rounds = 0, ex_w = 0;
    double ex_p = 0.02;
    export_cmd->add_option("--family", ex_family, "repetition or rotated_planar");
    export_cmd->add_option("-d,--distance", ex_d, "Code distance");
    export_cmd->add_option("-r,--rounds", ex_rounds, "Rounds (default 8d)");
    export_cmd->add_option("-p,--p", ex_p, "Physical error rate");
    export_cmd->add_option("-o,--output", ex_graph, "Graph file (default stdout)");
    export_cmd->add_option("--layout", ex_layout, "Also write the parallel window manifest here");
    export_cmd->add_option("--w", ex_w, "Window unit for the manifest (default d)");

    auto* tiling_cmd = app.add_subcommand("tiling-demo", "Colour commit regions and check the partition");
    std::string t_kind = "hex";
    int t_width = 12, t_height = 12, t_rounds = 1, t_d = 3, t_w = 0;
    double t_cell = 2.5;
    tiling_cmd->add_option("--kind", t_kind, "hex or time")->check(CLI::IsMember({"hex", "time"}));
    tiling_cmd->add_option("--width", t_width, "Grid width (hex)");
    tiling_cmd->add_option("--height", t_height, "Grid height (hex)");
    tiling_cmd->add_option("--cell", t_cell, "Hexagon side (hex)");
    tiling_cmd->add_option("-r,--rounds", t_rounds, "Rounds; hex extrudes when > 1, time defaults to 8d");
    tiling_cmd->add_option("-d,--distance", t_d, "Code distance (time)");
    tiling_cmd->add_option("--w", t_w, "Window unit (time, default d)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("fidelity")) {
            ExperimentConfig defaults;
            auto cfg = resolve(fidelity, defaults);
            emit(cfg, run_fidelity(cfg));
        } else if (app.got_subcommand("throughput")) {
            ExperimentConfig defaults;
            defaults.distances = {9};
            defaults.rounds.clear();
            defaults.shots = 5;
            defaults.workers = {1, 2, 4, 8};
            auto cfg = resolve(throughput, defaults);
            emit(cfg, run_throughput(cfg));
        } else if (app.got_subcommand("plan")) {
            if (plan_n_par > 0)
                plan.n_par = plan_n_par;
            std::cout << run_plan(plan).dump(2) << '\n';
        } else if (app.got_subcommand("export-graph")) {
            const int rounds = ex_rounds > 0 ? ex_rounds : 8 * ex_d;
            auto graph = build_graph({parse_code_family(ex_family), ex_d, rounds, ex_p});
            std::unique_ptr<std::ofstream> file;
            write_graph_text(open_output(ex_graph, file), graph);
            if (!ex_layout.empty()) {
                std::ofstream out(ex_layout);
                if (!out)
                    throw std::runtime_error("cannot write '" + ex_layout + "'");
                write_layout_manifest(out, window_layout(rounds, ex_w > 0 ? ex_w : ex_d));
            }
        } else if (app.got_subcommand("tiling-demo")) {
            RegionPartition partition;
            std::vector<int> order;
            if (t_kind == "hex") {
                partition = color_hex_2d(t_width, t_height, t_cell);
                if (t_rounds > 1)
                    partition = extrude(partition, t_rounds);
            } else {
                const int rounds = t_rounds > 1 ? t_rounds : 8 * t_d;
                auto graph = build_graph({CodeFamily::RotatedPlanar, t_d, rounds, 0.01});
                partition = color_1d_time(graph, window_layout(rounds, t_w > 0 ? t_w : t_d));
            }
            for (int c = 0; c < partition.num_colors(); c++)
                order.push_back(c);
            write_partition_manifest(std::cout, partition);
            auto check = validate_coloring(partition);
            auto faces = assign_boundaries(partition, order);
            std::vector<int> rough(partition.num_colors(), 0);
            for (const auto& f : faces)
                rough[partition.regions[f.region].color] += f.rough_faces();
            std::cout << "check valid=" << (check.valid ? "true" : "false")
                      << " min_same_color_separation=" << check.min_same_color_separation
                      << " radius=" << partition.interaction_radius << '\n';
            for (int c = 0; c < partition.num_colors(); c++)
                std::cout << "layer " << color_label(c) << " rough_faces=" << rough[c] << '\n';
            if (!check.valid) {
                std::cerr << "parwin: invalid colouring: " << check.message << '\n';
                return 3;
            }
        }
    } catch (const ParameterError& e) {
        std::cerr << "parwin: invalid parameter: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "parwin: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
