#include "qpc/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qpc/dist_engine.hpp"

namespace qpc {

ChainParams ChainParams::from(double l_tot, double l0) {
    if (!(l_tot > 0.0)) throw std::invalid_argument("L_tot must be > 0");
    if (!(l0 > 0.0)) throw std::invalid_argument("L0 must be > 0");
    ChainParams chain;
    chain.L_tot = l_tot;
    chain.L0_requested = l0;
    // smallest N with N*L0 >= L_tot; product test avoids ceil() picking
    // up quotient rounding dust
    double n0 = std::floor(l_tot / l0);
    if (n0 < 1.0) n0 = 1.0;
    double n = (n0 * l0 >= l_tot) ? n0 : n0 + 1.0;
    if (n > static_cast<double>(std::numeric_limits<int>::max())) {
        throw std::invalid_argument("station count overflows int");
    }
    chain.N = static_cast<int>(n);
    chain.L0_eff = l_tot / static_cast<double>(chain.N);
    return chain;
}

double success_probability(const TrinaryPairDist& p, long long n_hops) {
    if (n_hops < 1) throw std::invalid_argument("n_hops must be >= 1");
    const double heralded = p.heralded_mass();
    if (heralded >= 1.0) return 0.0;
    if (heralded <= 0.0) return 1.0;
    return std::exp(static_cast<double>(n_hops) * std::log1p(-heralded));
}

namespace {

// P(odd number of flips over N hops) for per-hop flip probability
// ratio d = 2*wrong/conditioned: (1 - (1-d)^N) / 2, kept accurate when
// d is tiny and handled sign-correctly when 1-d goes negative.
double odd_parity_probability(double d, long long n_hops) {
    if (d <= 0.0) return 0.0;
    const double r = 1.0 - d;
    if (r == 0.0) return 0.5;
    if (r > 0.0) {
        return -0.5 * std::expm1(static_cast<double>(n_hops) * std::log1p(-d));
    }
    const double mag = std::exp(static_cast<double>(n_hops) * std::log(-r));
    const double rn = (n_hops % 2 == 0) ? mag : -mag;
    return 0.5 * (1.0 - rn);
}

}  // namespace

QberResult qber(const TrinaryPairDist& p, long long n_hops) {
    if (n_hops < 1) throw std::invalid_argument("n_hops must be >= 1");
    const double conditioned = p.success_mass();
    if (!(conditioned > 0.0)) {
        throw std::domain_error("qber: no outcome mass without heralded failure");
    }
    const double d_x = 2.0 * (p.at(-1, +1) + p.at(-1, -1)) / conditioned;
    const double d_z = 2.0 * (p.at(+1, -1) + p.at(-1, -1)) / conditioned;
    QberResult out;
    out.q_x = odd_parity_probability(d_x, n_hops);
    out.q_z = odd_parity_probability(d_z, n_hops);
    out.q = 0.5 * (out.q_x + out.q_z);
    return out;
}

double binary_entropy(double q) {
    if (q <= 0.0 || q >= 1.0) return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double key_rate(double p_succ, double q, double t0) {
    if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be > 0");
    const double secret_fraction = 1.0 - 2.0 * binary_entropy(q);
    const double r = p_succ * secret_fraction / t0;
    return r > 0.0 ? r : 0.0;
}

double encoded_error_rate(const TrinaryPairDist& p) {
    return p.error_mass();
}

RepeaterMetrics metrics_from_encoded(const TrinaryPairDist& encoded, const ChainParams& chain,
                                     double eta, double eps, double t0) {
    RepeaterMetrics out;
    out.n_hops = chain.N;
    out.L0_eff = chain.L0_eff;
    out.eta = eta;
    out.eps = eps;
    out.eps_en = encoded_error_rate(encoded);
    if (!(encoded.success_mass() > 0.0)) {
        // fully degenerate hop: every trajectory heralds a failure
        out.p_succ = 0.0;
        out.q_x = out.q_z = out.q = 0.5;
        out.rate_t0 = 0.0;
        out.rate = 0.0;
        return out;
    }
    out.p_succ = success_probability(encoded, chain.N);
    const QberResult q = qber(encoded, chain.N);
    out.q_x = q.q_x;
    out.q_z = q.q_z;
    out.q = q.q;
    out.rate_t0 = key_rate(out.p_succ, out.q, 1.0);
    out.rate = out.rate_t0 / t0;
    return out;
}

RepeaterMetrics evaluate_repeater(const CodeParams& code, const ChannelParams& channel,
                                  double l_tot) {
    const ChainParams chain = ChainParams::from(l_tot, channel.L0);
    ChannelParams effective = channel;
    effective.L0 = chain.L0_eff;

    const double eta = transmission(effective);
    const double eps = effective_epsilon(effective);
    const QubitPairDist qd = qubit_pair_dist(eta, eps);
    const TrinaryPairDist row = row_pair_dist(code, qd);
    const TrinaryPairDist encoded = encoded_pair_dist(code, row);
    return metrics_from_encoded(encoded, chain, eta, eps, channel.t0);
}

}  // namespace qpc
