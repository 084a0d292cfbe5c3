#include "parwin/resources.h"

#include <algorithm>
#include <cmath>

#include "parwin/errors.h"

namespace parwin {

namespace {

constexpr double kRelTol = 1e-9;

/// Ceiling that ignores floating-point noise just above an integer.
long long tolerant_ceil(double x) {
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= kRelTol * std::max(1.0, std::abs(x)))
        return static_cast<long long>(nearest);
    return static_cast<long long>(std::ceil(x));
}

double rounds_per_worker(const WindowConfig& cfg) {
    return cfg.n_com + cfg.parallel_window_rounds();
}

}  // namespace

void TimingModel::validate() const {
    if (!(tau_rd > 0) || !(tau_W > 0))
        throw ParameterError("timing model needs tau_rd > 0 and tau_W > 0");
    if (!(tau_0 >= 0))
        throw ParameterError("timing model needs tau_0 >= 0");
}

int min_workers(const WindowConfig& cfg, const TimingModel& timing) {
    cfg.validate_parallel();
    timing.validate();
    double ratio = 2 * timing.tau_W / (rounds_per_worker(cfg) * timing.tau_rd);
    return static_cast<int>(std::max(1LL, tolerant_ceil(ratio)));
}

bool acquisition_covers_decoding(int n_par, const WindowConfig& cfg, const TimingModel& timing) {
    double acquisition = n_par * rounds_per_worker(cfg) * timing.tau_rd;
    double decoding = 2 * timing.tau_W;
    return acquisition >= decoding * (1 - kRelTol);
}

long long auxiliary_qubits(double tau, int distance, double tau_rd) {
    if (distance < 1 || !(tau_rd > 0) || !(tau >= 0))
        throw ParameterError("auxiliary_qubits needs distance >= 1, tau_rd > 0, tau >= 0");
    return tolerant_ceil(tau / (distance * tau_rd));
}

ResourcePlan response_time(const WindowConfig& cfg, const TimingModel& timing, int distance, std::optional<int> n_par) {
    cfg.validate_parallel();
    timing.validate();
    ResourcePlan plan;
    plan.N_par = n_par.value_or(min_workers(cfg, timing));
    if (plan.N_par < 1)
        throw ParameterError("response_time needs N_par >= 1");
    plan.n_lag = static_cast<long long>(plan.N_par) * static_cast<long long>(rounds_per_worker(cfg));
    plan.tau = static_cast<double>(plan.n_lag) * timing.tau_rd;
    plan.tau_clock = distance * timing.tau_rd + plan.tau;
    plan.aux_qubits = auxiliary_qubits(plan.tau, distance, timing.tau_rd);
    return plan;
}

OverheadReport overhead_report(double tau, int distance, double tau_rd, int logical_qubits, int t_depth) {
    if (logical_qubits < 1 || t_depth < 0)
        throw ParameterError("overhead_report needs logical_qubits >= 1 and t_depth >= 0");
    OverheadReport r;
    r.time_factor = (distance * tau_rd + tau) / (distance * tau_rd);
    r.aux_qubits = auxiliary_qubits(tau, distance, tau_rd);
    r.qubit_factor = static_cast<double>(logical_qubits + r.aux_qubits) / logical_qubits;
    r.total_response = t_depth * tau;
    return r;
}

OverheadReport overhead_report(const ResourcePlan& plan, int distance, double tau_rd, int logical_qubits, int t_depth) {
    return overhead_report(plan.tau, distance, tau_rd, logical_qubits, t_depth);
}

}  // namespace parwin
