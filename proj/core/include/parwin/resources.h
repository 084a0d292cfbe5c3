#ifndef PARWIN_RESOURCES_H
#define PARWIN_RESOURCES_H

#include <optional>

#include "parwin/windowing.h"

namespace parwin {

/// Seconds per QEC round, per window decode and per task dispatch.
struct TimingModel {
    double tau_rd = 1e-6;
    double tau_W = 1e-4;
    double tau_0 = 0;

    /// tau_rd and tau_W must be strictly positive; tau_0 must be non-negative.
    void validate() const;
};

struct ResourcePlan {
    int N_par = 1;
    /// Rounds being decoded at any instant: N_par * (n_com + n_W).
    long long n_lag = 0;
    /// Response time n_lag * tau_rd, seconds.
    double tau = 0;
    /// Logical clock time d * tau_rd + tau, seconds.
    double tau_clock = 0;
    /// Auxiliary logical qubits needed to trade the response time for space: ceil(tau / (d tau_rd)).
    long long aux_qubits = 0;
};

/// Least worker count N >= 1 with N (n_com + n_W) tau_rd >= 2 tau_W, where n_W = 3w.
int min_workers(const WindowConfig& cfg, const TimingModel& timing);

/// True when N (n_com + n_W) tau_rd >= 2 tau_W (up to rounding in the last ulp).
bool acquisition_covers_decoding(int n_par, const WindowConfig& cfg, const TimingModel& timing);

/// Response-time accounting for a parallel window decoder. Uses min_workers when n_par is empty.
ResourcePlan response_time(const WindowConfig& cfg, const TimingModel& timing, int distance,
                           std::optional<int> n_par = std::nullopt);

/// ceil(tau / (d tau_rd)), with values within 1e-9 of an integer treated as that integer.
long long auxiliary_qubits(double tau, int distance, double tau_rd);

struct OverheadReport {
    /// Slow-down of the logical clock without auto-correction: tau_clock / (d tau_rd).
    double time_factor = 1;
    long long aux_qubits = 0;
    /// (W + aux) / W.
    double qubit_factor = 1;
    /// k * tau for an algorithm of T-depth k.
    double total_response = 0;
};

OverheadReport overhead_report(double tau, int distance, double tau_rd, int logical_qubits, int t_depth);
OverheadReport overhead_report(const ResourcePlan& plan, int distance, double tau_rd, int logical_qubits, int t_depth);

}  // namespace parwin

#endif
