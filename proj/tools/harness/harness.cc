#include "harness.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "parwin/errors.h"
#include "parwin/resources.h"
#include "parwin/rng.h"
#include "parwin/scheduler.h"
#include "parwin/syndrome.h"
#include "parwin/windowing.h"

namespace parwin::harness {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("invalid integer for " + what + ": '" + text + "'");
    }
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("invalid number for " + what + ": '" + text + "'");
    }
}

const std::string& single(const std::string& key, const std::vector<std::string>& values) {
    if (values.size() != 1)
        throw ParameterError("config key '" + key + "' expects a single value");
    return values.front();
}

}  // namespace

std::string RoundsRule::to_string() const {
    return per_distance ? std::to_string(value) + "d" : std::to_string(value);
}

RoundsRule RoundsRule::parse(const std::string& raw) {
    std::string text = trim(raw);
    RoundsRule rule;
    rule.per_distance = !text.empty() && text.back() == 'd';
    if (rule.per_distance)
        text.pop_back();
    rule.value = parse_int(text, "rounds");
    if (rule.value < 1)
        throw ParameterError("rounds must be positive, got '" + raw + "'");
    return rule;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(parse_int(trim(item), "list"));
    return out;
}

void ExperimentConfig::validate() const {
    if (distances.empty())
        throw ParameterError("at least one distance is required");
    for (int d : distances)
        CodeParams{family, d, 1, p}.validate();
    if (shots < 1)
        throw ParameterError("shots must be >= 1");
    if (workers.empty())
        throw ParameterError("at least one worker count is required");
    for (int n : workers)
        if (n < 1)
            throw ParameterError("worker counts must be >= 1");
    if (w < 0 || n_com < 0 || n_buf < 0)
        throw ParameterError("window sizes must be non-negative");
    for (const auto& m : modes)
        if (m != "global" && m != "sliding" && m != "parallel" && m != "pipeline")
            throw ParameterError("unknown mode '" + m + "' (expected global, sliding, parallel or pipeline)");
    if (throughput_mode != "parallel" && throughput_mode != "pipeline")
        throw ParameterError("throughput_mode must be parallel or pipeline");
    if (!(tau_rd > 0))
        throw ParameterError("tau_rd must be positive");
    make_decoder(decoder);
}

ConfigValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    ConfigValues values;
    try {
        for (const auto& item : CLI::ConfigTOML().from_config(in)) {
            if (item.name == "++" || item.name == "--")
                continue;
            std::string key = item.fullname();
            std::vector<std::string> inputs;
            for (const auto& raw : item.inputs) {
                std::stringstream ss(raw);
                std::string part;
                while (std::getline(ss, part, ','))
                    if (!trim(part).empty())
                        inputs.push_back(trim(part));
            }
            values[key] = inputs;
        }
    } catch (const CLI::ParseError& e) {
        throw std::runtime_error("config file '" + path + "': " + e.what());
    }
    return values;
}

void apply_config(ExperimentConfig& cfg, const ConfigValues& values) {
    for (const auto& [key, v] : values) {
        if (key == "family") {
            cfg.family = parse_code_family(single(key, v));
        } else if (key == "d" || key == "distances") {
            cfg.distances.clear();
            for (const auto& s : v)
                cfg.distances.push_back(parse_int(s, key));
        } else if (key == "p") {
            cfg.p = parse_double(single(key, v), key);
        } else if (key == "rounds") {
            cfg.rounds.clear();
            for (const auto& s : v)
                cfg.rounds.push_back(RoundsRule::parse(s));
        } else if (key == "shots") {
            cfg.shots = parse_int(single(key, v), key);
        } else if (key == "workers") {
            cfg.workers.clear();
            for (const auto& s : v)
                cfg.workers.push_back(parse_int(s, key));
        } else if (key == "w") {
            cfg.w = parse_int(single(key, v), key);
        } else if (key == "n_com") {
            cfg.n_com = parse_int(single(key, v), key);
        } else if (key == "n_buf") {
            cfg.n_buf = parse_int(single(key, v), key);
        } else if (key == "seed") {
            cfg.seed = std::stoull(single(key, v));
        } else if (key == "decoder") {
            cfg.decoder = single(key, v);
        } else if (key == "modes") {
            cfg.modes = v;
        } else if (key == "throughput_mode") {
            cfg.throughput_mode = single(key, v);
        } else if (key == "tau_rd") {
            cfg.tau_rd = parse_double(single(key, v), key);
        } else if (key == "output") {
            cfg.output = single(key, v);
        } else if (key == "csv") {
            cfg.csv = single(key, v);
        } else {
            throw ParameterError("unknown config key '" + key + "'");
        }
    }
}

std::optional<std::vector<int>> workers_from_env() {
    const char* raw = std::getenv(kWorkersEnv);
    if (!raw || !*raw)
        return std::nullopt;
    auto list = parse_int_list(raw);
    if (list.empty())
        throw ParameterError(std::string(kWorkersEnv) + " is set but holds no worker counts");
    return list;
}

double binomial_stderr(double rate, int shots) {
    return std::sqrt(rate * (1 - rate) / shots);
}

namespace {

Record base_record(const ExperimentConfig& cfg, const char* kind, const std::string& mode, int d, int rounds,
                   int workers) {
    Record r;
    r["kind"] = kind;
    r["mode"] = mode;
    r["family"] = to_string(cfg.family);
    r["d"] = d;
    r["p"] = cfg.p;
    r["rounds"] = rounds;
    r["shots"] = cfg.shots;
    r["workers"] = workers;
    r["seed"] = cfg.seed;
    r["decoder"] = cfg.decoder;
    return r;
}

uint64_t cell_seed(uint64_t base, int d, int rounds) {
    return derive_seed(derive_seed(base, static_cast<uint64_t>(d)), static_cast<uint64_t>(rounds));
}

}  // namespace

std::vector<Record> run_fidelity(const ExperimentConfig& cfg) {
    cfg.validate();
    auto inner = make_decoder(cfg.decoder);
    const int workers = cfg.workers.front();
    std::unique_ptr<Executor> executor;
    if (workers > 1)
        executor = std::make_unique<ThreadPool>(workers);
    else
        executor = std::make_unique<InlineExecutor>();

    std::vector<Record> records;
    for (int d : cfg.distances) {
        for (const auto& rule : cfg.rounds) {
            const int rounds = rule.resolve(d);
            auto graph = build_graph({cfg.family, d, rounds, cfg.p});
            const uint64_t base = cell_seed(cfg.seed, d, rounds);
            const size_t m = cfg.modes.size();
            std::vector<std::vector<uint8_t>> fails(m, std::vector<uint8_t>(cfg.shots, 0));
            std::unique_ptr<Pipeline> pipeline;
            for (int shot = 0; shot < cfg.shots; shot++) {
                auto err = sample_error(graph, cfg.p, derive_seed(base, static_cast<uint64_t>(shot)));
                auto stream = extract_syndrome(graph, err);
                for (size_t k = 0; k < m; k++) {
                    const std::string& mode = cfg.modes[k];
                    Correction c;
                    if (mode == "global") {
                        c = global_decode(graph, stream, *inner);
                    } else if (mode == "sliding") {
                        c = sliding_window_decode(graph, stream,
                                                  WindowConfig::sliding(cfg.sliding_n_com(d), cfg.sliding_n_buf(d)),
                                                  *inner);
                    } else if (mode == "parallel") {
                        c = parallel_window_decode(graph, stream, WindowConfig::parallel(cfg.window_w(d)), *inner,
                                                   *executor);
                    } else {
                        if (!pipeline)
                            pipeline = std::make_unique<Pipeline>(
                                graph, PipelinePlan{std::max(1, workers / 2), cfg.window_w(d)}, *inner);
                        InMemorySource source(stream);
                        c = pipeline->run(source).correction;
                    }
                    fails[k][shot] = c.logical_flip != stream.logical_frame;
                }
            }

            auto global_it = std::find(cfg.modes.begin(), cfg.modes.end(), "global");
            const std::vector<uint8_t>* reference =
                global_it == cfg.modes.end() ? nullptr : &fails[global_it - cfg.modes.begin()];
            for (size_t k = 0; k < m; k++) {
                const std::string& mode = cfg.modes[k];
                Record r = base_record(cfg, "fidelity", mode, d, rounds, workers);
                r["rounds_rule"] = rule.to_string();
                if (mode == "sliding") {
                    r["n_com"] = cfg.sliding_n_com(d);
                    r["n_buf"] = cfg.sliding_n_buf(d);
                }
                if (mode == "parallel" || mode == "pipeline")
                    r["w"] = cfg.window_w(d);
                const long failures = std::accumulate(fails[k].begin(), fails[k].end(), 0L);
                const double rate = static_cast<double>(failures) / cfg.shots;
                r["failures"] = failures;
                r["logical_error_rate"] = rate;
                r["stderr"] = binomial_stderr(rate, cfg.shots);
                r["r_dec"] = nullptr;
                r["r_dec_stderr"] = nullptr;
                if (reference && mode != "global") {
                    // Paired per-shot difference against the global decoder on the same samples.
                    double sum = 0, sum_sq = 0;
                    for (int s = 0; s < cfg.shots; s++) {
                        double x = static_cast<double>(fails[k][s]) - (*reference)[s];
                        sum += x;
                        sum_sq += x * x;
                    }
                    const double n = cfg.shots;
                    const double mean = sum / n;
                    const double var = n > 1 ? (sum_sq - n * mean * mean) / (n - 1) : 0;
                    const double sigma = std::sqrt(std::max(0.0, var) / n);
                    r["paired_diff"] = mean;
                    r["paired_sigma"] = sigma;
                    r["within_2sigma"] = std::abs(mean) <= 2 * sigma;
                }
                records.push_back(std::move(r));
            }
        }
    }
    return records;
}

std::vector<Record> run_throughput(const ExperimentConfig& cfg) {
    cfg.validate();
    auto inner = make_decoder(cfg.decoder);
    std::vector<Record> records;
    for (int d : cfg.distances) {
        for (int workers : cfg.workers) {
            ThroughputOptions opt;
            opt.family = cfg.family;
            opt.distance = d;
            opt.p = cfg.p;
            opt.workers = workers;
            opt.shots = cfg.shots;
            opt.seed = derive_seed(cfg.seed, static_cast<uint64_t>(d));
            opt.tau_rd = cfg.tau_rd;
            opt.mode = cfg.throughput_mode == "pipeline" ? ThroughputMode::Pipeline : ThroughputMode::ParallelPool;
            opt.rounds = cfg.rounds.empty() ? 0 : cfg.rounds.front().resolve(d);
            auto rep = measure_throughput(opt, *inner);
            Record r = base_record(cfg, "throughput", cfg.throughput_mode, d, rep.rounds, rep.workers);
            r["w"] = d;
            r["logical_error_rate"] = nullptr;
            r["stderr"] = nullptr;
            r["r_dec"] = rep.r_dec_mean;
            r["r_dec_mean"] = rep.r_dec_mean;
            r["r_dec_stderr"] = rep.r_dec_stderr;
            r["tau_w_mean"] = rep.tau_w_mean;
            r["tau0_est"] = rep.tau0_est;
            r["f"] = rep.f;
            r["r_proc"] = rep.r_proc;
            r["r_gen"] = rep.r_gen;
            r["wall_time"] = rep.wall_time;
            r["dispatch_bound"] = rep.dispatch_bound;
            records.push_back(std::move(r));
        }
    }
    return records;
}

Record run_plan(const PlanInputs& in) {
    const int w = in.w > 0 ? in.w : in.distance;
    auto cfg = WindowConfig::parallel(w);
    TimingModel timing{in.tau_rd, in.tau_W, in.tau_0};
    auto plan = response_time(cfg, timing, in.distance, in.n_par);
    auto overhead = overhead_report(plan, in.distance, in.tau_rd, in.logical_qubits, in.t_depth);
    Record r;
    r["d"] = in.distance;
    r["w"] = w;
    r["tau_rd"] = in.tau_rd;
    r["tau_W"] = in.tau_W;
    r["N_par"] = plan.N_par;
    r["min_workers"] = min_workers(cfg, timing);
    r["n_lag"] = plan.n_lag;
    r["tau"] = plan.tau;
    r["tau_clock"] = plan.tau_clock;
    r["aux_qubits"] = plan.aux_qubits;
    r["acquisition_covers_decoding"] = acquisition_covers_decoding(plan.N_par, cfg, timing);
    r["logical_qubits"] = in.logical_qubits;
    r["time_factor"] = overhead.time_factor;
    r["qubit_factor"] = overhead.qubit_factor;
    r["t_depth"] = in.t_depth;
    r["total_response"] = overhead.total_response;
    return r;
}

const std::vector<std::string>& timing_fields() {
    static const std::vector<std::string> fields{"r_dec",  "r_dec_mean", "r_dec_stderr", "tau_w_mean",
                                                 "tau0_est", "f",        "r_proc",       "wall_time",
                                                 "dispatch_bound"};
    return fields;
}

void write_json_lines(std::ostream& out, const std::vector<Record>& records) {
    for (const auto& r : records)
        out << r.dump() << '\n';
}

void write_csv(std::ostream& out, const std::vector<Record>& records) {
    std::vector<std::string> columns;
    for (const auto& r : records)
        for (const auto& [key, _] : r.items())
            if (std::find(columns.begin(), columns.end(), key) == columns.end())
                columns.push_back(key);
    for (size_t i = 0; i < columns.size(); i++)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : records) {
        for (size_t i = 0; i < columns.size(); i++) {
            if (i)
                out << ',';
            auto it = r.find(columns[i]);
            if (it == r.end() || it->is_null())
                continue;
            out << (it->is_string() ? it->get<std::string>() : it->dump());
        }
        out << '\n';
    }
}

std::optional<std::string> check_record(const Record& r) {
    auto require = [&](const char* key, auto&& pred, const char* type) -> std::optional<std::string> {
        auto it = r.find(key);
        if (it == r.end())
            return std::string("missing field '") + key + "'";
        if (!pred(*it))
            return std::string("field '") + key + "' is not " + type;
        return std::nullopt;
    };
    auto is_int = [](const Record& v) { return v.is_number_integer(); };
    auto is_num = [](const Record& v) { return v.is_number(); };
    auto is_num_or_null = [](const Record& v) { return v.is_number() || v.is_null(); };
    auto is_str = [](const Record& v) { return v.is_string(); };
    for (auto check : {require("kind", is_str, "a string"), require("mode", is_str, "a string"),
                       require("family", is_str, "a string"), require("d", is_int, "an integer"),
                       require("p", is_num, "a number"), require("rounds", is_int, "an integer"),
                       require("shots", is_int, "an integer"), require("workers", is_int, "an integer"),
                       require("seed", is_int, "an integer"), require("logical_error_rate", is_num_or_null, "a number"),
                       require("stderr", is_num_or_null, "a number"), require("r_dec", is_num_or_null, "a number"),
                       require("r_dec_stderr", is_num_or_null, "a number")})
        if (check)
            return check;
    static const std::vector<std::string> modes{"global", "sliding", "parallel", "pipeline"};
    if (std::find(modes.begin(), modes.end(), r["mode"].get<std::string>()) == modes.end())
        return "mode '" + r["mode"].get<std::string>() + "' is not one of global, sliding, parallel, pipeline";
    const std::string kind = r["kind"];
    if (kind == "fidelity") {
        if (!r["logical_error_rate"].is_number() || !r["stderr"].is_number())
            return "fidelity record needs logical_error_rate and stderr";
        double rate = r["logical_error_rate"];
        double expected = binomial_stderr(rate, r["shots"].get<int>());
        if (std::abs(r["stderr"].get<double>() - expected) > 1e-12)
            return "stderr does not equal sqrt(p(1-p)/shots)";
    } else if (kind == "throughput") {
        for (const char* key : {"r_dec_mean", "r_dec_stderr", "tau_w_mean", "tau0_est", "f"})
            if (auto c = require(key, is_num, "a number"))
                return c;
    } else {
        return "unknown record kind '" + kind + "'";
    }
    return std::nullopt;
}

}  // namespace parwin::harness
