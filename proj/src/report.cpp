#include "qpc/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qpc {

namespace {

using nlohmann::json;

// Flat-order labels for trinary tables: index 0 -> outcome 0, 1 -> +1,
// 2 -> -1 in each position.
const char* kOutcomeLabel[3] = {"0", "+1", "-1"};

struct Flags {
    std::string text;

    void add(const std::string& flag) {
        if (!text.empty()) text += ';';
        text += flag;
    }
};

std::string prob12(double x, const char* name, Flags& flags) {
    if (x != 0.0 && std::isfinite(x) && std::fabs(x) < kUnderflowLimit) {
        flags.add(std::string("underflow:") + name);
        return "0";
    }
    return fmt12(x);
}

// Numbers round-trip through the 12-digit text form so JSON and CSV
// agree; non-finite values map to null.
json json_num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(fmt12(x));
}

json trinary_json(const TrinaryPairDist& dist) {
    json rows = json::array();
    for (int ai = 0; ai < 3; ++ai) {
        for (int bi = 0; bi < 3; ++bi) {
            rows.push_back({{"alpha", kOutcomeLabel[ai]},
                            {"beta", kOutcomeLabel[bi]},
                            {"p", json_num(dist.v[static_cast<std::size_t>(3 * ai + bi)])}});
        }
    }
    return json{{"entries", rows}, {"sum", json_num(dist.sum())}};
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("output json: ") + what);
}

}  // namespace

std::string fmt12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------- CSV

std::string to_csv(const RateReport& r) {
    Flags flags;
    std::string out =
        "n,m,L0_km,L0_eff_km,L_tot_km,N,eta,eps,p_succ,q_x,q_z,q,r_t0,eps_en,flags\n";
    const RepeaterMetrics& met = r.metrics;
    const std::string p_succ = prob12(met.p_succ, "p_succ", flags);
    const std::string q_x = prob12(met.q_x, "q_x", flags);
    const std::string q_z = prob12(met.q_z, "q_z", flags);
    const std::string q = prob12(met.q, "q", flags);
    const std::string r_t0 = prob12(met.rate_t0, "r_t0", flags);
    const std::string eps_en = prob12(met.eps_en, "eps_en", flags);
    out += std::to_string(r.code.n) + ',' + std::to_string(r.code.m) + ',' +
           fmt12(r.L0_requested) + ',' + fmt12(met.L0_eff) + ',' + fmt12(r.L_tot) + ',' +
           std::to_string(met.n_hops) + ',' + fmt12(met.eta) + ',' + fmt12(met.eps) + ',' +
           p_succ + ',' + q_x + ',' + q_z + ',' + q + ',' + r_t0 + ',' + eps_en + ',' +
           flags.text + '\n';
    return out;
}

std::string to_csv(const DistReport& r) {
    std::string out = "table,entry,value\n";
    auto add = [&out](const char* table, const std::string& entry, double value) {
        out += table;
        out += ',' + entry + ',' + fmt12(value) + '\n';
    };
    add("qubit_pair", "eps_e", r.qd.eps_e);
    add("qubit_pair", "eps_I", r.qd.eps_I);
    add("qubit_pair", "eps_X", r.qd.eps_X);
    add("qubit_pair", "eps_Y", r.qd.eps_Y);
    add("qubit_pair", "eps_Z", r.qd.eps_Z);
    add("qubit_pair", "sum", r.qd.sum());
    auto add_table = [&](const char* table, const TrinaryPairDist& dist) {
        for (int ai = 0; ai < 3; ++ai) {
            for (int bi = 0; bi < 3; ++bi) {
                std::string entry = std::string(kOutcomeLabel[ai]) + '/' + kOutcomeLabel[bi];
                add(table, entry, dist.v[static_cast<std::size_t>(3 * ai + bi)]);
            }
        }
        add(table, "sum", dist.sum());
    };
    add_table("row", r.row);
    add_table("encoded", r.encoded);
    return out;
}

std::string to_csv(const ThresholdReport& r) {
    Flags flags;
    if (!r.result.achievable) flags.add("not_achievable");
    std::string out = "eps,loss,target,n,m,qubits,eps_en,flags\n";
    out += fmt12(r.query.eps) + ',' + fmt12(r.query.loss) + ',' + fmt12(r.query.target) + ',' +
           std::to_string(r.result.n) + ',' + std::to_string(r.result.m) + ',' +
           std::to_string(static_cast<long long>(r.result.n) * r.result.m) + ',' +
           prob12(r.result.eps_en, "eps_en", flags) + ',' + flags.text + '\n';
    return out;
}

std::string to_csv(const McBlockReport& r) {
    std::string out = "alpha,beta,count,p_hat,std_err,p_analytic,z\n";
    for (int ai = 0; ai < 3; ++ai) {
        for (int bi = 0; bi < 3; ++bi) {
            const std::size_t idx = static_cast<std::size_t>(3 * ai + bi);
            const int alpha = ai == 0 ? 0 : (ai == 1 ? +1 : -1);
            const int beta = bi == 0 ? 0 : (bi == 1 ? +1 : -1);
            const double p_hat = r.estimate.p_hat(alpha, beta);
            const double err = r.estimate.std_err(alpha, beta);
            const double p_ref = r.analytic.v[idx];
            const double z = err > 0.0 ? (p_hat - p_ref) / err : (p_hat == p_ref ? 0.0 : INFINITY);
            out += std::string(kOutcomeLabel[ai]) + ',' + kOutcomeLabel[bi] + ',' +
                   std::to_string(r.estimate.counts[idx]) + ',' + fmt12(p_hat) + ',' +
                   fmt12(err) + ',' + fmt12(p_ref) + ',' + fmt12(z) + '\n';
        }
    }
    return out;
}

std::string to_csv(const McChainReport& r) {
    std::string out = "quantity,estimate,std_err,analytic,z\n";
    auto add = [&out](const char* name, double hat, double err, double ref) {
        const double z = err > 0.0 ? (hat - ref) / err : (hat == ref ? 0.0 : INFINITY);
        out += std::string(name) + ',' + fmt12(hat) + ',' + fmt12(err) + ',' + fmt12(ref) +
               ',' + fmt12(z) + '\n';
    };
    const double traj = static_cast<double>(r.estimate.trajectories);
    const double surv = static_cast<double>(r.estimate.survivors);
    const double ps = r.estimate.p_succ_hat();
    add("p_succ", ps, std::sqrt(ps * (1.0 - ps) / traj), r.p_succ_analytic);
    const double qx = r.estimate.q_x_hat();
    const double qz = r.estimate.q_z_hat();
    const double qx_err = surv > 0.0 ? std::sqrt(qx * (1.0 - qx) / surv) : 0.0;
    const double qz_err = surv > 0.0 ? std::sqrt(qz * (1.0 - qz) / surv) : 0.0;
    add("q_x", qx, qx_err, r.q_x_analytic);
    add("q_z", qz, qz_err, r.q_z_analytic);
    return out;
}

std::string to_csv(const std::vector<CostResult>& rows, const PolylogFit* fit) {
    std::string out =
        "L_tot_km,n,m,L0_km,N,eta,eps,p_succ,q_x,q_z,q,r_t0,cost,cost_coeff,k,flags\n";
    for (const CostResult& r : rows) {
        Flags flags;
        if (!r.feasible) flags.add("no_key");
        const RepeaterMetrics& met = r.metrics;
        const std::string p_succ = prob12(met.p_succ, "p_succ", flags);
        const std::string q_x = prob12(met.q_x, "q_x", flags);
        const std::string q_z = prob12(met.q_z, "q_z", flags);
        const std::string q = prob12(met.q, "q", flags);
        const std::string r_t0 = prob12(met.rate_t0, "r_t0", flags);
        out += fmt12(r.L_tot) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
               fmt12(r.L0) + ',' + std::to_string(met.n_hops) + ',' + fmt12(met.eta) + ',' +
               fmt12(met.eps) + ',' + p_succ + ',' + q_x + ',' + q_z + ',' + q + ',' + r_t0 +
               ',' + fmt12(r.cost) + ',' + fmt12(r.cost_coeff) + ',' + fmt12(r.k) + ',' +
               flags.text + '\n';
    }
    if (fit && fit->points >= 2) {
        out += "# polylog_fit exponent=" + fmt12(fit->exponent) +
               " intercept=" + fmt12(fit->intercept) + " points=" + std::to_string(fit->points) +
               '\n';
    }
    return out;
}

// --------------------------------------------------------------- JSON

nlohmann::json to_json(const RateReport& r) {
    const RepeaterMetrics& met = r.metrics;
    return json{{"command", "rate"},
                {"params",
                 {{"n", r.code.n},
                  {"m", r.code.m},
                  {"L0_km", json_num(r.L0_requested)},
                  {"L_tot_km", json_num(r.L_tot)}}},
                {"result",
                 {{"N", met.n_hops},
                  {"L0_eff_km", json_num(met.L0_eff)},
                  {"eta", json_num(met.eta)},
                  {"eps", json_num(met.eps)},
                  {"p_succ", json_num(met.p_succ)},
                  {"q_x", json_num(met.q_x)},
                  {"q_z", json_num(met.q_z)},
                  {"q", json_num(met.q)},
                  {"r_t0", json_num(met.rate_t0)},
                  {"eps_en", json_num(met.eps_en)}}}};
}

nlohmann::json to_json(const DistReport& r) {
    return json{{"command", "dist"},
                {"params", {{"n", r.code.n}, {"m", r.code.m}}},
                {"result",
                 {{"eta", json_num(r.eta)},
                  {"eps", json_num(r.eps)},
                  {"qubit_pair",
                   {{"eps_e", json_num(r.qd.eps_e)},
                    {"eps_I", json_num(r.qd.eps_I)},
                    {"eps_X", json_num(r.qd.eps_X)},
                    {"eps_Y", json_num(r.qd.eps_Y)},
                    {"eps_Z", json_num(r.qd.eps_Z)},
                    {"sum", json_num(r.qd.sum())}}},
                  {"row", trinary_json(r.row)},
                  {"encoded", trinary_json(r.encoded)}}}};
}

nlohmann::json to_json(const ThresholdReport& r) {
    return json{{"command", "threshold"},
                {"params",
                 {{"eps", json_num(r.query.eps)},
                  {"loss", json_num(r.query.loss)},
                  {"target", json_num(r.query.target)},
                  {"n_max", r.query.n_max},
                  {"m_max", r.query.m_max}}},
                {"result",
                 {{"achievable", r.result.achievable},
                  {"n", r.result.n},
                  {"m", r.result.m},
                  {"qubits", static_cast<long long>(r.result.n) * r.result.m},
                  {"eps_en", json_num(r.result.eps_en)}}}};
}

nlohmann::json to_json(const McBlockReport& r) {
    json rows = json::array();
    for (int ai = 0; ai < 3; ++ai) {
        for (int bi = 0; bi < 3; ++bi) {
            const std::size_t idx = static_cast<std::size_t>(3 * ai + bi);
            const int alpha = ai == 0 ? 0 : (ai == 1 ? +1 : -1);
            const int beta = bi == 0 ? 0 : (bi == 1 ? +1 : -1);
            rows.push_back({{"alpha", kOutcomeLabel[ai]},
                            {"beta", kOutcomeLabel[bi]},
                            {"count", r.estimate.counts[idx]},
                            {"p_hat", json_num(r.estimate.p_hat(alpha, beta))},
                            {"std_err", json_num(r.estimate.std_err(alpha, beta))},
                            {"p_analytic", json_num(r.analytic.v[idx])}});
        }
    }
    return json{{"command", "mc"},
                {"params",
                 {{"n", r.code.n},
                  {"m", r.code.m},
                  {"samples", r.samples},
                  {"seed", r.seed},
                  {"hops", 1}}},
                {"result", {{"entries", rows}}}};
}

nlohmann::json to_json(const McChainReport& r) {
    return json{{"command", "mc"},
                {"params",
                 {{"n", r.code.n},
                  {"m", r.code.m},
                  {"samples", r.samples},
                  {"seed", r.seed},
                  {"hops", r.hops}}},
                {"result",
                 {{"trajectories", r.estimate.trajectories},
                  {"survivors", r.estimate.survivors},
                  {"p_succ_hat", json_num(r.estimate.p_succ_hat())},
                  {"q_x_hat", json_num(r.estimate.q_x_hat())},
                  {"q_z_hat", json_num(r.estimate.q_z_hat())},
                  {"p_succ_analytic", json_num(r.p_succ_analytic)},
                  {"q_x_analytic", json_num(r.q_x_analytic)},
                  {"q_z_analytic", json_num(r.q_z_analytic)}}}};
}

nlohmann::json to_json(const std::vector<CostResult>& rows, const PolylogFit* fit) {
    json arr = json::array();
    for (const CostResult& r : rows) {
        const RepeaterMetrics& met = r.metrics;
        arr.push_back({{"L_tot_km", json_num(r.L_tot)},
                       {"n", r.n},
                       {"m", r.m},
                       {"L0_km", json_num(r.L0)},
                       {"N", met.n_hops},
                       {"eta", json_num(met.eta)},
                       {"eps", json_num(met.eps)},
                       {"p_succ", json_num(met.p_succ)},
                       {"q_x", json_num(met.q_x)},
                       {"q_z", json_num(met.q_z)},
                       {"q", json_num(met.q)},
                       {"r_t0", json_num(met.rate_t0)},
                       {"cost", json_num(r.cost)},
                       {"cost_coeff", json_num(r.cost_coeff)},
                       {"k", json_num(r.k)},
                       {"feasible", r.feasible}});
    }
    json doc{{"command", "optimize"}, {"rows", arr}};
    if (fit && fit->points >= 2) {
        doc["polylog_fit"] = {{"exponent", json_num(fit->exponent)},
                              {"intercept", json_num(fit->intercept)},
                              {"points", fit->points}};
    }
    return doc;
}

void validate_output_json(const nlohmann::json& doc) {
    require(doc.is_object(), "document must be an object");
    require(doc.contains("command") && doc["command"].is_string(), "missing command");
    const std::string command = doc["command"].get<std::string>();
    if (command == "optimize") {
        require(doc.contains("rows") && doc["rows"].is_array(), "missing rows");
        for (const auto& row : doc["rows"]) {
            for (const char* key : {"L_tot_km", "n", "m", "L0_km", "N", "eta", "eps", "p_succ",
                                    "q_x", "q_z", "q", "r_t0", "cost", "cost_coeff", "k"}) {
                require(row.contains(key), key);
                require(row[key].is_number() || row[key].is_null(), key);
            }
            require(row.contains("feasible") && row["feasible"].is_boolean(), "feasible");
        }
        return;
    }
    require(doc.contains("params") && doc["params"].is_object(), "missing params");
    require(doc.contains("result") && doc["result"].is_object(), "missing result");
    const json& result = doc["result"];
    if (command == "rate") {
        for (const char* key : {"N", "L0_eff_km", "eta", "eps", "p_succ", "q_x", "q_z", "q",
                                "r_t0", "eps_en"}) {
            require(result.contains(key) && result[key].is_number(), key);
        }
    } else if (command == "dist") {
        for (const char* key : {"qubit_pair", "row", "encoded"}) {
            require(result.contains(key) && result[key].is_object(), key);
        }
        for (const char* table : {"row", "encoded"}) {
            const json& t = result[table];
            require(t.contains("entries") && t["entries"].is_array() && t["entries"].size() == 9,
                    "trinary entries");
            require(t.contains("sum") && t["sum"].is_number(), "trinary sum");
        }
    } else if (command == "threshold") {
        require(result.contains("achievable") && result["achievable"].is_boolean(), "achievable");
        for (const char* key : {"n", "m", "qubits"}) {
            require(result.contains(key) && result[key].is_number_integer(), key);
        }
        require(result.contains("eps_en") && result["eps_en"].is_number(), "eps_en");
    } else if (command == "mc") {
        const bool block = result.contains("entries");
        if (block) {
            require(result["entries"].is_array() && result["entries"].size() == 9, "mc entries");
            for (const auto& row : result["entries"]) {
                for (const char* key : {"count", "p_hat", "std_err", "p_analytic"}) {
                    require(row.contains(key) && row[key].is_number(), key);
                }
            }
        } else {
            for (const char* key : {"trajectories", "survivors", "p_succ_hat", "q_x_hat",
                                    "q_z_hat", "p_succ_analytic"}) {
                require(result.contains(key) && result[key].is_number(), key);
            }
        }
    } else {
        require(false, "unknown command");
    }
}

}  // namespace qpc
