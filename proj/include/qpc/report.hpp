#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpc/mc_oracle.hpp"
#include "qpc/metrics.hpp"
#include "qpc/optimizer.hpp"

namespace qpc {

// All numeric output goes through fmt12: 12 significant digits, so a
// given configuration always serializes byte-identically. Probabilities
// below kUnderflowLimit serialize as 0 and are named in a flags column.
inline constexpr double kUnderflowLimit = 1e-300;

std::string fmt12(double x);

struct RateReport {
    CodeParams code{1, 1};
    double L0_requested = 0.0;
    double L_tot = 0.0;
    RepeaterMetrics metrics;
};

struct DistReport {
    CodeParams code{1, 1};
    double eta = 0.0;
    double eps = 0.0;
    QubitPairDist qd;
    TrinaryPairDist row;
    TrinaryPairDist encoded;
};

struct ThresholdReport {
    ThresholdQuery query;
    ThresholdResult result;
};

struct McBlockReport {
    CodeParams code{1, 1};
    long long samples = 0;
    std::uint64_t seed = 0;
    McEstimate estimate;
    TrinaryPairDist analytic;
};

struct McChainReport {
    CodeParams code{1, 1};
    long long samples = 0;
    std::uint64_t seed = 0;
    int hops = 1;
    ChainEstimate estimate;
    double p_succ_analytic = 0.0;
    double q_x_analytic = 0.0;
    double q_z_analytic = 0.0;
};

std::string to_csv(const RateReport& report);
std::string to_csv(const DistReport& report);
std::string to_csv(const ThresholdReport& report);
std::string to_csv(const McBlockReport& report);
std::string to_csv(const McChainReport& report);
// Shared by optimize (single row) and sweep (one row per point).
std::string to_csv(const std::vector<CostResult>& rows, const PolylogFit* fit = nullptr);

nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const DistReport& report);
nlohmann::json to_json(const ThresholdReport& report);
nlohmann::json to_json(const McBlockReport& report);
nlohmann::json to_json(const McChainReport& report);
nlohmann::json to_json(const std::vector<CostResult>& rows, const PolylogFit* fit = nullptr);

// Schema re-validation for emitted JSON. Throws std::invalid_argument
// on a missing or mistyped field.
void validate_output_json(const nlohmann::json& doc);

}  // namespace qpc
