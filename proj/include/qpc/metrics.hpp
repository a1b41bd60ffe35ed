#pragma once

#include "qpc/channel_model.hpp"
#include "qpc/code_params.hpp"
#include "qpc/trinary_dist.hpp"

namespace qpc {

// Segmentation of a total distance into N equal hops. N = ceil(L_tot/L0);
// the effective spacing L_tot/N is what feeds the transmission, so every
// (L_tot, L0) pair is well defined without assuming divisibility.
struct ChainParams {
    double L_tot = 0.0;
    double L0_requested = 0.0;
    int N = 1;
    double L0_eff = 0.0;

    static ChainParams from(double l_tot, double l0);
};

// Probability that none of the N hops yields a heralded failure.
double success_probability(const TrinaryPairDist& p, long long n_hops);

struct QberResult {
    double q_x = 0.0;
    double q_z = 0.0;
    double q = 0.0;
};

// Probability of an odd number of silent flips per basis across N hops,
// conditioned on no heralded failure. alpha=-1 outcomes feed q_x,
// beta=-1 outcomes feed q_z. Throws std::domain_error when the
// conditioning mass is zero.
QberResult qber(const TrinaryPairDist& p, long long n_hops);

// h(q) with the q=0 and q=1 endpoints continuous at 0.
double binary_entropy(double q);

// Asymptotic secure key rate max[P_succ * (1 - 2h(Q)), 0] / t0.
double key_rate(double p_succ, double q, double t0);

// Single-hop encoded error rate 1 - p(+1,+1), by direct summation of the
// eight complementary entries.
double encoded_error_rate(const TrinaryPairDist& p);

struct RepeaterMetrics {
    double p_succ = 0.0;
    double q_x = 0.0;
    double q_z = 0.0;
    double q = 0.0;
    double rate = 0.0;     // secret bits per unit time
    double rate_t0 = 0.0;  // dimensionless rate * t0
    double eps_en = 0.0;
    double eta = 0.0;
    double eps = 0.0;
    int n_hops = 1;
    double L0_eff = 0.0;
};

// Figures of merit for a chain whose encoded-pair distribution is
// already known. The grid optimizer evaluates many points against one
// scan and must reproduce evaluate_repeater bit for bit, so both share
// this reduction.
RepeaterMetrics metrics_from_encoded(const TrinaryPairDist& encoded, const ChainParams& chain,
                                     double eta, double eps, double t0);

// Full chain: channel -> qubit-pair -> row -> encoded -> end-to-end
// figures of merit. channel.L0 is the requested spacing; the effective
// spacing after segmentation is used throughout.
RepeaterMetrics evaluate_repeater(const CodeParams& code, const ChannelParams& channel,
                                  double l_tot);

}  // namespace qpc
