#include "qpc/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpc {

namespace {

void check_probability(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
    }
}

}  // namespace

void ChannelParams::validate() const {
    check_probability(eps_d, "eps_d");
    check_probability(eps_g, "eps_g");
    check_probability(eps_m, "eps_m");
    if (eps_direct) check_probability(*eps_direct, "eps_direct");
    check_probability(p_c, "p_c");
    if (!(L0 > 0.0)) throw std::invalid_argument("L0 must be > 0");
    if (!(L_att > 0.0)) throw std::invalid_argument("L_att must be > 0");
    if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be > 0");
}

double effective_epsilon(const ChannelParams& params, bool* clamped) {
    params.validate();
    double eps = params.eps_direct ? *params.eps_direct
                                   : params.eps_d + params.eps_g / 2.0 + 2.0 * params.eps_m;
    bool hit = false;
    if (eps > 1.0) {
        eps = 1.0;
        hit = true;
    } else if (eps < 0.0) {
        eps = 0.0;
        hit = true;
    }
    if (clamped) *clamped = hit;
    return eps;
}

double transmission(const ChannelParams& params) {
    params.validate();
    return (1.0 - params.p_c) * std::exp(-params.L0 / params.L_att);
}

QubitPairDist qubit_pair_dist(double eta, double eps) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0,1]");
    }
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("eps must lie in [0,1]");
    }
    const double faithful = 1.0 - 1.5 * eps;
    if (faithful < 0.0) {
        throw std::domain_error("eps > 2/3 leaves no faithful outcome mass");
    }
    QubitPairDist qd;
    qd.eps_e = 1.0 - eta;
    qd.eps_X = eta * eps / 2.0;
    qd.eps_Y = eta * eps / 2.0;
    qd.eps_Z = eta * eps / 2.0;
    qd.eps_I = eta * faithful;
    return qd;
}

QubitPairDist qubit_pair_dist(const ChannelParams& params) {
    return qubit_pair_dist(transmission(params), effective_epsilon(params));
}

}  // namespace qpc
