#pragma once

#include <vector>

#include "qpc/channel_model.hpp"
#include "qpc/code_params.hpp"
#include "qpc/metrics.hpp"

namespace qpc {

// One evaluated grid point. cost = 2nm * N / R (qubit-time per secret
// bit); cost_coeff = (2nm)^k / (R * L0_eff), which for k=1 equals
// cost / L_tot. Infeasible points (R = 0) carry feasible = false and
// infinite costs, and are excluded from minima.
struct CostResult {
    int n = 0;
    int m = 0;
    double L0 = 0.0;      // requested grid spacing
    double L_tot = 0.0;
    double k = 1.0;
    bool feasible = false;
    double cost = 0.0;
    double cost_coeff = 0.0;
    RepeaterMetrics metrics;

    double r_t0() const { return metrics.rate_t0; }
};

struct IntRange {
    int lo = 2;
    int hi = 60;
};

struct SearchConfig {
    IntRange n_range{2, 60};
    IntRange m_range{2, 60};
    double l0_min = 0.5;   // km
    double l0_max = 5.0;   // km
    double l0_step = 0.1;  // km
    double k = 1.0;        // qubit-cost exponent in [0,1]
    ChannelParams channel; // L0 field is ignored; the grid supplies it
    double L_tot = 500.0;  // km
    int threads = 0;       // 0: hardware concurrency
};

// Full metric chain at one grid point.
CostResult cost(const CodeParams& code, const ChannelParams& channel, double l_tot,
                double k = 1.0);

// Exhaustive, deterministic grid search over (n, m, L0). Ties resolve to
// the smallest n*m, then smallest n, then largest L0. Returns an
// infeasible marker when no grid point yields a positive rate.
CostResult minimize_cost(const SearchConfig& config);

struct ThresholdQuery {
    double eps = 0.0;      // effective operational error
    double loss = 0.0;     // per-hop photon loss 1 - eta
    double target = 2e-14; // required single-hop encoded error rate
    int n_max = 400;
    int m_max = 25;
};

struct ThresholdResult {
    bool achievable = false;
    int n = 0;
    int m = 0;
    double eps_en = 0.0;
};

// Smallest code (by qubit count, then by n) whose single-hop encoded
// error rate meets the target.
ThresholdResult threshold_code(const ThresholdQuery& query);

enum class SweepAxis { l_tot, eps, p_c };

// One optimization per sweep value, applied to the base config.
std::vector<CostResult> sweep(const SearchConfig& base, SweepAxis axis,
                              const std::vector<double>& values);

// Least-squares fit of log(cost_coeff) against log(log(L_tot)).
// Diagnostic only; exponent > 0 indicates poly-logarithmic growth.
struct PolylogFit {
    double exponent = 0.0;
    double intercept = 0.0;
    int points = 0;
};

PolylogFit fit_polylog(const std::vector<CostResult>& results);

}  // namespace qpc
