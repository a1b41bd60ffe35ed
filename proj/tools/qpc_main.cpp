// qpc: analytical performance engine and optimizer for (n,m) parity-code
// repeater chains. Subcommands: dist, rate, optimize, threshold, sweep, mc.
//
// Every run is fully specified by flags, or by a JSON config file
// (--config) whose keys are the long flag names with dashes replaced by
// underscores; explicit flags override the file. Exit codes: 0 success,
// 2 invalid configuration, 3 infeasible single-point query.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpc/mc_oracle.hpp"
#include "qpc/metrics.hpp"
#include "qpc/optimizer.hpp"
#include "qpc/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

// Tracks which options came from the command line so a config file can
// fill in only the rest.
class FlagRegistry {
  public:
    template <class T>
    void bind(CLI::Option* opt, const std::string& key, T* target) {
        entries_.push_back({opt, key, [target](const json& v) { *target = v.get<T>(); }});
    }

    void merge(const json& cfg) {
        for (const auto& e : entries_) {
            if (e.opt->count() == 0 && cfg.contains(e.key)) {
                e.apply(cfg.at(e.key));
            }
        }
    }

    bool provided(const std::string& key, const json* cfg) const {
        for (const auto& e : entries_) {
            if (e.key != key) continue;
            if (e.opt->count() > 0) return true;
            return cfg != nullptr && cfg->contains(key);
        }
        return false;
    }

  private:
    struct Entry {
        CLI::Option* opt;
        std::string key;
        std::function<void(const json&)> apply;
    };
    std::vector<Entry> entries_;
};

struct CommonFlags {
    std::string format = "csv";
    std::string out_path;
    std::string config_path;
    int threads = 0;
};

struct ChannelFlags {
    double eps = 0.0;
    double eps_d = 0.0;
    double eps_g = 0.0;
    double eps_m = 0.0;
    double pc = 0.0;
    double l0 = 1.0;
    double latt = 20.0;
    double t0 = 1.0;
};

struct CodeFlags {
    int n = 0;
    int m = 0;
};

struct SearchFlags {
    int n_min = 2;
    int n_max = 0;  // 0: default depends on k
    int m_min = 2;
    int m_max = 0;
    double l0_min = 0.5;
    double l0_max = 5.0;
    double l0_step = 0.1;
    double k = 1.0;
    double ltot = 0.0;
};

struct SweepFlags {
    std::string ltot_list;
    std::string eps_list;
    std::string pc_list;
    double ltot_from = 500.0;
    double ltot_to = 10000.0;
    double ltot_step = 500.0;
    bool fit = false;
};

struct McFlags {
    double samples = 100000;
    std::uint64_t seed = 1;
    int hops = 1;
};

struct Invalid : std::runtime_error {
    explicit Invalid(const std::string& what) : std::runtime_error(what) {}
};

void add_common(CLI::App* cmd, FlagRegistry& reg, CommonFlags& f) {
    reg.bind(cmd->add_option("--format", f.format, "Output format: csv or json"), "format",
             &f.format);
    reg.bind(cmd->add_option("--out", f.out_path, "Write output to a file instead of stdout"),
             "out", &f.out_path);
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
    reg.bind(cmd->add_option("--threads", f.threads, "Worker thread cap (QPC_THREADS fallback)"),
             "threads", &f.threads);
}

void add_channel(CLI::App* cmd, FlagRegistry& reg, ChannelFlags& f) {
    reg.bind(cmd->add_option("--eps", f.eps, "Effective operational error"), "eps", &f.eps);
    reg.bind(cmd->add_option("--eps-d", f.eps_d, "Depolarization error"), "eps_d", &f.eps_d);
    reg.bind(cmd->add_option("--eps-g", f.eps_g, "Two-qubit gate error"), "eps_g", &f.eps_g);
    reg.bind(cmd->add_option("--eps-m", f.eps_m, "Measurement error"), "eps_m", &f.eps_m);
    reg.bind(cmd->add_option("--pc", f.pc, "Coupling loss"), "pc", &f.pc);
    reg.bind(cmd->add_option("--l0", f.l0, "Repeater spacing [km]"), "l0", &f.l0);
    reg.bind(cmd->add_option("--latt", f.latt, "Attenuation length [km]"), "latt", &f.latt);
    reg.bind(cmd->add_option("--t0", f.t0, "Error-correction cycle time"), "t0", &f.t0);
}

void add_code(CLI::App* cmd, FlagRegistry& reg, CodeFlags& f) {
    reg.bind(cmd->add_option("--n", f.n, "Sub-block count"), "n", &f.n);
    reg.bind(cmd->add_option("--m", f.m, "Qubits per sub-block"), "m", &f.m);
}

qpc::ChannelParams make_channel(const ChannelFlags& f, const FlagRegistry& reg,
                                const json* cfg) {
    qpc::ChannelParams ch;
    ch.eps_d = f.eps_d;
    ch.eps_g = f.eps_g;
    ch.eps_m = f.eps_m;
    if (reg.provided("eps", cfg)) ch.eps_direct = f.eps;
    ch.p_c = f.pc;
    ch.L0 = f.l0;
    ch.L_att = f.latt;
    ch.t0 = f.t0;
    return ch;
}

qpc::CodeParams make_code(const CodeFlags& f) {
    if (f.n < 1 || f.m < 1) throw Invalid("--n and --m are required (>= 1)");
    return qpc::CodeParams(f.n, f.m);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw Invalid("bad list element: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw Invalid("empty value list");
    return out;
}

int env_threads() {
    const char* env = std::getenv("QPC_THREADS");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v > 0 ? v : 0;
}

int resolve_threads(const CommonFlags& f) {
    if (f.threads > 0) return f.threads;
    return env_threads();
}

void emit(const CommonFlags& common, const std::string& csv, const json& doc) {
    std::string text;
    if (common.format == "json") {
        qpc::validate_output_json(doc);
        text = doc.dump(2);
        text += '\n';
    } else if (common.format == "csv") {
        text = csv;
    } else {
        throw Invalid("unknown format: " + common.format);
    }
    if (common.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) throw Invalid("cannot open output file: " + common.out_path);
    file << text;
}

json load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Invalid("cannot open config file: " + path);
    json cfg;
    try {
        file >> cfg;
    } catch (const json::parse_error& e) {
        throw Invalid(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw Invalid("config file must hold a JSON object");
    return cfg;
}

// ------------------------------------------------------------ handlers

int run_dist(const CommonFlags& common, const CodeFlags& code_f, const ChannelFlags& chan_f,
             const FlagRegistry& reg, const json* cfg) {
    const qpc::CodeParams code = make_code(code_f);
    const qpc::ChannelParams channel = make_channel(chan_f, reg, cfg);

    qpc::DistReport report;
    report.code = code;
    report.eta = qpc::transmission(channel);
    report.eps = qpc::effective_epsilon(channel);
    report.qd = qpc::qubit_pair_dist(report.eta, report.eps);
    report.row = qpc::row_pair_dist(code, report.qd);
    report.encoded = qpc::encoded_pair_dist(code, report.row);

    emit(common, to_csv(report), to_json(report));
    return kExitOk;
}

int run_rate(const CommonFlags& common, const CodeFlags& code_f, const ChannelFlags& chan_f,
             double ltot, const FlagRegistry& reg, const json* cfg) {
    if (!(ltot > 0.0)) throw Invalid("--ltot is required (> 0)");
    const qpc::CodeParams code = make_code(code_f);
    const qpc::ChannelParams channel = make_channel(chan_f, reg, cfg);

    qpc::RateReport report;
    report.code = code;
    report.L0_requested = channel.L0;
    report.L_tot = ltot;
    report.metrics = qpc::evaluate_repeater(code, channel, ltot);

    emit(common, to_csv(report), to_json(report));
    return kExitOk;
}

qpc::SearchConfig make_search(const SearchFlags& f, const ChannelFlags& chan_f,
                              const FlagRegistry& reg, const json* cfg, int threads) {
    qpc::SearchConfig sc;
    sc.n_range.lo = f.n_min;
    sc.m_range.lo = f.m_min;
    // wider default code range when qubits are cheap (k < 1)
    const int default_hi = f.k < 1.0 ? 70 : 60;
    sc.n_range.hi = f.n_max > 0 ? f.n_max : default_hi;
    sc.m_range.hi = f.m_max > 0 ? f.m_max : default_hi;
    sc.l0_min = f.l0_min;
    sc.l0_max = f.l0_max;
    sc.l0_step = f.l0_step;
    sc.k = f.k;
    sc.channel = make_channel(chan_f, reg, cfg);
    sc.L_tot = f.ltot;
    sc.threads = threads;
    return sc;
}

int run_optimize(const CommonFlags& common, const SearchFlags& search_f,
                 const ChannelFlags& chan_f, const FlagRegistry& reg, const json* cfg) {
    if (!(search_f.ltot > 0.0)) throw Invalid("--ltot is required (> 0)");
    const qpc::SearchConfig sc =
        make_search(search_f, chan_f, reg, cfg, resolve_threads(common));
    const qpc::CostResult best = qpc::minimize_cost(sc);

    const std::vector<qpc::CostResult> rows{best};
    emit(common, to_csv(rows), to_json(rows));
    return best.feasible ? kExitOk : kExitInfeasible;
}

int run_threshold(const CommonFlags& common, double eps, double loss, double target, int n_max,
                  int m_max) {
    qpc::ThresholdQuery query;
    query.eps = eps;
    query.loss = loss;
    query.target = target;
    query.n_max = n_max;
    query.m_max = m_max;

    qpc::ThresholdReport report;
    report.query = query;
    report.result = qpc::threshold_code(query);

    emit(common, to_csv(report), to_json(report));
    return report.result.achievable ? kExitOk : kExitInfeasible;
}

int run_sweep(const CommonFlags& common, const SearchFlags& search_f, const SweepFlags& sweep_f,
              const ChannelFlags& chan_f, const FlagRegistry& reg, const json* cfg) {
    int axes = 0;
    axes += !sweep_f.ltot_list.empty();
    axes += !sweep_f.eps_list.empty();
    axes += !sweep_f.pc_list.empty();
    if (axes > 1) throw Invalid("choose a single sweep axis");

    qpc::SweepAxis axis = qpc::SweepAxis::l_tot;
    std::vector<double> values;
    if (!sweep_f.eps_list.empty()) {
        axis = qpc::SweepAxis::eps;
        values = parse_list(sweep_f.eps_list);
    } else if (!sweep_f.pc_list.empty()) {
        axis = qpc::SweepAxis::p_c;
        values = parse_list(sweep_f.pc_list);
    } else if (!sweep_f.ltot_list.empty()) {
        values = parse_list(sweep_f.ltot_list);
    } else {
        if (!(sweep_f.ltot_step > 0.0) || sweep_f.ltot_to < sweep_f.ltot_from) {
            throw Invalid("bad --ltot-from/--ltot-to/--ltot-step range");
        }
        for (double v = sweep_f.ltot_from; v <= sweep_f.ltot_to + 1e-9; v += sweep_f.ltot_step) {
            values.push_back(v);
        }
    }

    SearchFlags base = search_f;
    if (axis != qpc::SweepAxis::l_tot && !(base.ltot > 0.0)) {
        throw Invalid("--ltot is required when sweeping eps or pc");
    }
    if (axis == qpc::SweepAxis::l_tot) base.ltot = values.front();
    const qpc::SearchConfig sc = make_search(base, chan_f, reg, cfg, resolve_threads(common));

    const std::vector<qpc::CostResult> rows = qpc::sweep(sc, axis, values);
    qpc::PolylogFit fit;
    const bool want_fit = sweep_f.fit && axis == qpc::SweepAxis::l_tot;
    if (want_fit) fit = qpc::fit_polylog(rows);

    emit(common, to_csv(rows, want_fit ? &fit : nullptr),
         to_json(rows, want_fit ? &fit : nullptr));
    return kExitOk;
}

int run_mc(const CommonFlags& common, const CodeFlags& code_f, const ChannelFlags& chan_f,
           const McFlags& mc_f, const FlagRegistry& reg, const json* cfg) {
    qpc::McConfig mc;
    mc.code = make_code(code_f);
    mc.channel = make_channel(chan_f, reg, cfg);
    if (!(mc_f.samples >= 1.0)) throw Invalid("--samples must be >= 1");
    mc.samples = static_cast<long long>(std::llround(mc_f.samples));
    mc.seed = mc_f.seed;
    mc.hops = mc_f.hops;
    mc.threads = resolve_threads(common);

    const qpc::QubitPairDist qd = qpc::qubit_pair_dist(mc.channel);
    const qpc::TrinaryPairDist analytic =
        qpc::encoded_pair_dist(mc.code, qpc::row_pair_dist(mc.code, qd));

    if (mc.hops == 1) {
        qpc::McBlockReport report;
        report.code = mc.code;
        report.samples = mc.samples;
        report.seed = mc.seed;
        report.estimate = qpc::sample_block(mc);
        report.analytic = analytic;
        emit(common, to_csv(report), to_json(report));
    } else {
        qpc::McChainReport report;
        report.code = mc.code;
        report.samples = mc.samples;
        report.seed = mc.seed;
        report.hops = mc.hops;
        report.estimate = qpc::simulate_chain(mc);
        report.p_succ_analytic = qpc::success_probability(analytic, mc.hops);
        const qpc::QberResult q = qpc::qber(analytic, mc.hops);
        report.q_x_analytic = q.q_x;
        report.q_z_analytic = q.q_z;
        emit(common, to_csv(report), to_json(report));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(n,m) parity-code repeater performance engine"};
    app.require_subcommand(1);

    CommonFlags common;
    CodeFlags code_f;
    ChannelFlags chan_f;
    SearchFlags search_f;
    SweepFlags sweep_f;
    McFlags mc_f;
    double rate_ltot = 0.0;
    double th_eps = 0.0, th_loss = 0.0, th_target = 2e-14;
    int th_n_max = 400, th_m_max = 25;

    FlagRegistry reg;

    CLI::App* dist = app.add_subcommand("dist", "Outcome distributions for one hop");
    add_common(dist, reg, common);
    add_code(dist, reg, code_f);
    add_channel(dist, reg, chan_f);

    CLI::App* rate = app.add_subcommand("rate", "End-to-end chain figures of merit");
    add_common(rate, reg, common);
    add_code(rate, reg, code_f);
    add_channel(rate, reg, chan_f);
    reg.bind(rate->add_option("--ltot", rate_ltot, "Total distance [km]"), "ltot", &rate_ltot);

    CLI::App* optimize = app.add_subcommand("optimize", "Minimize the cost over (n, m, L0)");
    add_common(optimize, reg, common);
    add_channel(optimize, reg, chan_f);
    reg.bind(optimize->add_option("--ltot", search_f.ltot, "Total distance [km]"), "ltot",
             &search_f.ltot);
    reg.bind(optimize->add_option("--k", search_f.k, "Qubit-cost exponent in [0,1]"), "k",
             &search_f.k);
    reg.bind(optimize->add_option("--n-min", search_f.n_min, "Smallest n"), "n_min",
             &search_f.n_min);
    reg.bind(optimize->add_option("--n-max", search_f.n_max, "Largest n"), "n_max",
             &search_f.n_max);
    reg.bind(optimize->add_option("--m-min", search_f.m_min, "Smallest m"), "m_min",
             &search_f.m_min);
    reg.bind(optimize->add_option("--m-max", search_f.m_max, "Largest m"), "m_max",
             &search_f.m_max);
    reg.bind(optimize->add_option("--l0-min", search_f.l0_min, "Smallest spacing [km]"),
             "l0_min", &search_f.l0_min);
    reg.bind(optimize->add_option("--l0-max", search_f.l0_max, "Largest spacing [km]"),
             "l0_max", &search_f.l0_max);
    reg.bind(optimize->add_option("--l0-step", search_f.l0_step, "Spacing grid step [km]"),
             "l0_step", &search_f.l0_step);

    CLI::App* threshold =
        app.add_subcommand("threshold", "Smallest code reaching a target encoded error rate");
    add_common(threshold, reg, common);
    reg.bind(threshold->add_option("--eps", th_eps, "Effective operational error"), "eps",
             &th_eps);
    reg.bind(threshold->add_option("--loss", th_loss, "Per-hop photon loss 1 - eta"), "loss",
             &th_loss);
    reg.bind(threshold->add_option("--target", th_target, "Encoded error-rate target"),
             "target", &th_target);
    reg.bind(threshold->add_option("--n-max", th_n_max, "Largest n"), "n_max", &th_n_max);
    reg.bind(threshold->add_option("--m-max", th_m_max, "Largest m"), "m_max", &th_m_max);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "One optimization per sweep point");
    add_common(sweep_cmd, reg, common);
    add_channel(sweep_cmd, reg, chan_f);
    reg.bind(sweep_cmd->add_option("--ltot", search_f.ltot, "Total distance [km]"), "ltot",
             &search_f.ltot);
    reg.bind(sweep_cmd->add_option("--k", search_f.k, "Qubit-cost exponent in [0,1]"), "k",
             &search_f.k);
    reg.bind(sweep_cmd->add_option("--n-min", search_f.n_min, "Smallest n"), "n_min",
             &search_f.n_min);
    reg.bind(sweep_cmd->add_option("--n-max", search_f.n_max, "Largest n"), "n_max",
             &search_f.n_max);
    reg.bind(sweep_cmd->add_option("--m-min", search_f.m_min, "Smallest m"), "m_min",
             &search_f.m_min);
    reg.bind(sweep_cmd->add_option("--m-max", search_f.m_max, "Largest m"), "m_max",
             &search_f.m_max);
    reg.bind(sweep_cmd->add_option("--l0-min", search_f.l0_min, "Smallest spacing [km]"),
             "l0_min", &search_f.l0_min);
    reg.bind(sweep_cmd->add_option("--l0-max", search_f.l0_max, "Largest spacing [km]"),
             "l0_max", &search_f.l0_max);
    reg.bind(sweep_cmd->add_option("--l0-step", search_f.l0_step, "Spacing grid step [km]"),
             "l0_step", &search_f.l0_step);
    reg.bind(sweep_cmd->add_option("--ltot-list", sweep_f.ltot_list,
                                   "Comma-separated L_tot values [km]"),
             "ltot_list", &sweep_f.ltot_list);
    reg.bind(sweep_cmd->add_option("--eps-list", sweep_f.eps_list,
                                   "Comma-separated eps values"),
             "eps_list", &sweep_f.eps_list);
    reg.bind(sweep_cmd->add_option("--pc-list", sweep_f.pc_list, "Comma-separated p_c values"),
             "pc_list", &sweep_f.pc_list);
    reg.bind(sweep_cmd->add_option("--ltot-from", sweep_f.ltot_from, "Range start [km]"),
             "ltot_from", &sweep_f.ltot_from);
    reg.bind(sweep_cmd->add_option("--ltot-to", sweep_f.ltot_to, "Range end [km]"), "ltot_to",
             &sweep_f.ltot_to);
    reg.bind(sweep_cmd->add_option("--ltot-step", sweep_f.ltot_step, "Range step [km]"),
             "ltot_step", &sweep_f.ltot_step);
    reg.bind(sweep_cmd->add_flag("--fit", sweep_f.fit, "Append the poly-log fit"), "fit",
             &sweep_f.fit);

    CLI::App* mc = app.add_subcommand("mc", "Monte-Carlo validation against the engine");
    add_common(mc, reg, common);
    add_code(mc, reg, code_f);
    add_channel(mc, reg, chan_f);
    reg.bind(mc->add_option("--samples", mc_f.samples, "Sample count (scientific ok)"),
             "samples", &mc_f.samples);
    reg.bind(mc->add_option("--seed", mc_f.seed, "RNG seed"), "seed", &mc_f.seed);
    reg.bind(mc->add_option("--hops", mc_f.hops, "Chain length; 1 samples single blocks"),
             "hops", &mc_f.hops);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        json cfg;
        const json* cfg_ptr = nullptr;
        if (!common.config_path.empty()) {
            cfg = load_config(common.config_path);
            reg.merge(cfg);
            cfg_ptr = &cfg;
        }

        if (dist->parsed()) return run_dist(common, code_f, chan_f, reg, cfg_ptr);
        if (rate->parsed()) return run_rate(common, code_f, chan_f, rate_ltot, reg, cfg_ptr);
        if (optimize->parsed()) return run_optimize(common, search_f, chan_f, reg, cfg_ptr);
        if (threshold->parsed())
            return run_threshold(common, th_eps, th_loss, th_target, th_n_max, th_m_max);
        if (sweep_cmd->parsed())
            return run_sweep(common, search_f, sweep_f, chan_f, reg, cfg_ptr);
        if (mc->parsed()) return run_mc(common, code_f, chan_f, mc_f, reg, cfg_ptr);
        std::cerr << "error: no subcommand\n";
        return kExitInvalid;
    } catch (const Invalid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}
