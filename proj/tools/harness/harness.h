#ifndef PARWIN_TOOLS_HARNESS_H
#define PARWIN_TOOLS_HARNESS_H

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parwin/decoding_graph.h"

namespace parwin::harness {

/// Round count for an experiment cell: either absolute ("24") or a multiple of d ("8d").
struct RoundsRule {
    int value = 8;
    bool per_distance = true;

    int resolve(int distance) const {
        return per_distance ? value * distance : value;
    }
    std::string to_string() const;
    static RoundsRule parse(const std::string& text);
};

struct ExperimentConfig {
    CodeFamily family = CodeFamily::RotatedPlanar;
    std::vector<int> distances{3};
    double p = 0.02;
    /// Empty for throughput selects 8 (N_par + 1) d.
    std::vector<RoundsRule> rounds{RoundsRule{}};
    int shots = 1000;
    std::vector<int> workers{1};
    /// Window sizes; 0 means d.
    int w = 0;
    int n_com = 0;
    int n_buf = 0;
    uint64_t seed = 1;
    std::string decoder = "uf";
    std::vector<std::string> modes{"global", "sliding", "parallel"};
    /// "parallel" (thread pool) or "pipeline" (block threads).
    std::string throughput_mode = "parallel";
    double tau_rd = 1e-6;
    std::string output;
    std::string csv;

    void validate() const;
    int window_w(int d) const {
        return w > 0 ? w : d;
    }
    int sliding_n_com(int d) const {
        return n_com > 0 ? n_com : d;
    }
    int sliding_n_buf(int d) const {
        return n_buf > 0 ? n_buf : d;
    }
};

/// Key/value pairs from a config file, one list of strings per key.
using ConfigValues = std::map<std::string, std::vector<std::string>>;

/// Flat `key = value` file; lists as `[a, b]` or comma-separated; `#` comments.
ConfigValues read_config_file(const std::string& path);

/// Applies recognised keys to `cfg`; throws ParameterError on unknown keys or bad values.
void apply_config(ExperimentConfig& cfg, const ConfigValues& values);

/// Environment variable that overrides the worker list (comma-separated).
inline constexpr const char* kWorkersEnv = "PARWIN_WORKERS";
std::optional<std::vector<int>> workers_from_env();

std::vector<int> parse_int_list(const std::string& text);

using Record = nlohmann::ordered_json;

/// stderr of a Bernoulli rate estimate.
double binomial_stderr(double rate, int shots);

/// One record per (d, rounds, mode): logical error rate from shared per-shot seeds.
std::vector<Record> run_fidelity(const ExperimentConfig& cfg);

/// One record per (d, workers).
std::vector<Record> run_throughput(const ExperimentConfig& cfg);

struct PlanInputs {
    int distance = 10;
    int w = 0;
    double tau_rd = 1e-6;
    double tau_W = 1e-4;
    double tau_0 = 0;
    std::optional<int> n_par;
    int logical_qubits = 100;
    int t_depth = 1;
};

Record run_plan(const PlanInputs& inputs);

/// Field names treated as timing output and excluded from reproducibility comparisons.
const std::vector<std::string>& timing_fields();

void write_json_lines(std::ostream& out, const std::vector<Record>& records);
/// Columns are the union of record keys in first-seen order.
void write_csv(std::ostream& out, const std::vector<Record>& records);

/// Structural check of one record against the published schema's required fields and types.
std::optional<std::string> check_record(const Record& record);

}  // namespace parwin::harness

#endif
