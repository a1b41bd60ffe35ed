#pragma once

#include <optional>

namespace qpc {

// Physical imperfection parameters of one repeater link.
struct ChannelParams {
    double eps_d = 0.0;  // depolarization per transmitted qubit
    double eps_g = 0.0;  // two-qubit gate error
    double eps_m = 0.0;  // measurement error
    std::optional<double> eps_direct;  // effective error given directly
    double p_c = 0.0;    // coupling loss
    double L0 = 1.0;     // repeater spacing [km]
    double L_att = 20.0; // fiber attenuation length [km]
    double t0 = 1.0;     // duration of one error-correction cycle

    // Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

// Effective single-qubit error eps_d + eps_g/2 + 2*eps_m (or eps_direct
// when supplied), clamped to [0,1]. *clamped reports whether the
// composition exceeded 1.
double effective_epsilon(const ChannelParams& params, bool* clamped = nullptr);

// Photon transmission probability (1 - p_c) * exp(-L0 / L_att).
double transmission(const ChannelParams& params);

// Loss-channel capacity vanishes for eta <= 1/2; the engine still
// computes below that point but callers can flag it.
inline bool loss_capacity_positive(double eta) { return eta > 0.5; }

// Joint outcome probabilities of one transmitted/local qubit-pair
// measurement: heralded erasure, faithful, and the three silent flips.
struct QubitPairDist {
    double eps_e = 0.0;
    double eps_I = 1.0;
    double eps_X = 0.0;
    double eps_Y = 0.0;
    double eps_Z = 0.0;

    double sum() const { return eps_e + eps_I + eps_X + eps_Y + eps_Z; }
};

// eps_e = 1-eta, eps_X = eps_Y = eps_Z = eta*eps/2, eps_I = eta*(1 - 3eps/2).
// Throws std::domain_error when eps > 2/3 would make eps_I negative.
QubitPairDist qubit_pair_dist(double eta, double eps);

// Same, with eta and eps derived from the channel parameters.
QubitPairDist qubit_pair_dist(const ChannelParams& params);

}  // namespace qpc
