#include "qpc/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qpc/dist_engine.hpp"
#include "qpc/parallel.hpp"

namespace qpc {

namespace {

void finalize_cost(CostResult& r) {
    const double qubits = 2.0 * static_cast<double>(r.n) * static_cast<double>(r.m);
    if (r.metrics.rate > 0.0) {
        r.feasible = true;
        r.cost = qubits * static_cast<double>(r.metrics.n_hops) / r.metrics.rate;
        r.cost_coeff = std::pow(qubits, r.k) / (r.metrics.rate * r.metrics.L0_eff);
    } else {
        r.feasible = false;
        r.cost = std::numeric_limits<double>::infinity();
        r.cost_coeff = std::numeric_limits<double>::infinity();
    }
}

// Strict "a beats b": lower cost, then fewer qubits, then smaller n,
// then larger spacing. Total order over distinct grid points, so the
// reduction result does not depend on evaluation partitioning.
bool better(const CostResult& a, const CostResult& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible) return false;
    if (a.cost != b.cost) return a.cost < b.cost;
    const long long anm = static_cast<long long>(a.n) * a.m;
    const long long bnm = static_cast<long long>(b.n) * b.m;
    if (anm != bnm) return anm < bnm;
    if (a.n != b.n) return a.n < b.n;
    return a.L0 > b.L0;
}

std::vector<double> l0_grid(const SearchConfig& config) {
    if (!(config.l0_step > 0.0) || !(config.l0_min > 0.0) || config.l0_max < config.l0_min) {
        throw std::invalid_argument("invalid L0 grid");
    }
    std::vector<double> grid;
    const int count =
        static_cast<int>(std::floor((config.l0_max - config.l0_min) / config.l0_step + 1e-9)) + 1;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) grid.push_back(config.l0_min + config.l0_step * i);
    return grid;
}

void validate_config(const SearchConfig& config) {
    if (config.n_range.lo < 1 || config.n_range.hi < config.n_range.lo ||
        config.m_range.lo < 1 || config.m_range.hi < config.m_range.lo) {
        throw std::invalid_argument("empty code search range");
    }
    if (!(config.k >= 0.0 && config.k <= 1.0)) {
        throw std::invalid_argument("k must lie in [0,1]");
    }
    if (!(config.L_tot > 0.0)) throw std::invalid_argument("L_tot must be > 0");
    ChannelParams probe = config.channel;
    probe.L0 = 1.0;
    probe.validate();
}

}  // namespace

CostResult cost(const CodeParams& code, const ChannelParams& channel, double l_tot, double k) {
    CostResult out;
    out.n = code.n;
    out.m = code.m;
    out.L0 = channel.L0;
    out.L_tot = l_tot;
    out.k = k;
    out.metrics = evaluate_repeater(code, channel, l_tot);
    finalize_cost(out);
    return out;
}

CostResult minimize_cost(const SearchConfig& config) {
    validate_config(config);
    const std::vector<double> grid = l0_grid(config);

    CostResult no_key;  // marker when no grid point yields a key
    no_key.L_tot = config.L_tot;
    no_key.k = config.k;
    no_key.cost = std::numeric_limits<double>::infinity();
    no_key.cost_coeff = std::numeric_limits<double>::infinity();

    std::vector<CostResult> slice_best(grid.size(), no_key);
    parallel_for(static_cast<int>(grid.size()), config.threads, [&](int gi) {
        const double l0 = grid[static_cast<std::size_t>(gi)];
        const ChainParams chain = ChainParams::from(config.L_tot, l0);
        ChannelParams effective = config.channel;
        effective.L0 = chain.L0_eff;
        const double eta = transmission(effective);
        const double eps = effective_epsilon(effective);
        const QubitPairDist qd = qubit_pair_dist(eta, eps);

        CostResult best = no_key;
        for (int m = config.m_range.lo; m <= config.m_range.hi; ++m) {
            const TrinaryPairDist row = row_pair_dist(CodeParams(1, m), qd);
            detail::EncodedScan<double> scan(config.n_range.hi, row.v.data());
            TrinaryPairDist encoded;
            for (int n = 1; n <= config.n_range.hi; ++n) {
                scan.advance();
                if (n < config.n_range.lo) continue;
                scan.current(encoded.v.data());
                CostResult point;
                point.n = n;
                point.m = m;
                point.L0 = l0;
                point.L_tot = config.L_tot;
                point.k = config.k;
                point.metrics =
                    metrics_from_encoded(encoded, chain, eta, eps, config.channel.t0);
                finalize_cost(point);
                if (better(point, best)) best = point;
            }
        }
        slice_best[static_cast<std::size_t>(gi)] = best;
    });

    CostResult best = slice_best.front();
    for (std::size_t i = 1; i < slice_best.size(); ++i) {
        if (better(slice_best[i], best)) best = slice_best[i];
    }
    return best;
}

ThresholdResult threshold_code(const ThresholdQuery& query) {
    if (!(query.loss >= 0.0 && query.loss < 1.0)) {
        throw std::invalid_argument("loss must lie in [0,1)");
    }
    if (!(query.target > 0.0)) throw std::invalid_argument("target must be > 0");
    if (query.n_max < 1 || query.m_max < 1) throw std::invalid_argument("empty search bounds");

    const double eta = 1.0 - query.loss;
    const QubitPairDist qd = qubit_pair_dist(eta, query.eps);

    ThresholdResult best;
    for (int m = 1; m <= query.m_max; ++m) {
        const TrinaryPairDist row = row_pair_dist(CodeParams(1, m), qd);
        detail::EncodedScan<double> scan(query.n_max, row.v.data());
        TrinaryPairDist encoded;
        for (int n = 1; n <= query.n_max; ++n) {
            scan.advance();
            scan.current(encoded.v.data());
            const double eps_en = encoded.error_mass();
            if (eps_en <= query.target) {
                const long long nm = static_cast<long long>(n) * m;
                const long long best_nm = static_cast<long long>(best.n) * best.m;
                if (!best.achievable || nm < best_nm || (nm == best_nm && n < best.n)) {
                    best.achievable = true;
                    best.n = n;
                    best.m = m;
                    best.eps_en = eps_en;
                }
                break;  // larger n with the same m only costs more qubits
            }
        }
    }
    return best;
}

std::vector<CostResult> sweep(const SearchConfig& base, SweepAxis axis,
                              const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    std::vector<CostResult> out;
    out.reserve(values.size());
    for (double value : values) {
        SearchConfig config = base;
        switch (axis) {
            case SweepAxis::l_tot: config.L_tot = value; break;
            case SweepAxis::eps: config.channel.eps_direct = value; break;
            case SweepAxis::p_c: config.channel.p_c = value; break;
        }
        out.push_back(minimize_cost(config));
    }
    return out;
}

PolylogFit fit_polylog(const std::vector<CostResult>& results) {
    PolylogFit fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const CostResult& r : results) {
        if (!r.feasible || !(r.L_tot > 1.0) || !(r.cost_coeff > 0.0)) continue;
        const double x = std::log(std::log(r.L_tot));
        const double y = std::log(r.cost_coeff);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++fit.points;
    }
    if (fit.points < 2) return fit;
    const double denom = fit.points * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.exponent = (fit.points * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.exponent * sx) / fit.points;
    return fit;
}

}  // namespace qpc
