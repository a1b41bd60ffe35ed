#pragma once

#include <array>
#include <cstdint>

#include "qpc/channel_model.hpp"
#include "qpc/code_params.hpp"
#include "qpc/dist_engine.hpp"
#include "qpc/trinary_dist.hpp"

namespace qpc {

// Exhaustive enumeration is limited to 5^(n*m) grids.
inline constexpr int kEnumerateMaxQubits = 12;

struct McConfig {
    CodeParams code{1, 1};
    ChannelParams channel;
    long long samples = 100000;
    std::uint64_t seed = 1;
    int hops = 1;
    int threads = 0;  // 0: hardware concurrency
};

// Tallied frequencies of the nine block outcomes. Counts are merged in
// fixed stream order, so results are reproducible from (seed, samples)
// regardless of the thread count.
struct McEstimate {
    std::array<std::uint64_t, 9> counts{};
    long long samples = 0;

    double p_hat(int alpha, int beta) const {
        return static_cast<double>(counts[TrinaryPairDist::flat(alpha, beta)]) /
               static_cast<double>(samples);
    }
    double std_err(int alpha, int beta) const;
};

// Draw per-qubit outcomes i.i.d., decode every grid with the shared
// decoder, tally the (alpha, beta) frequencies.
McEstimate sample_block(const McConfig& config);

// Exact p(alpha,beta) by summing the probability of every per-qubit
// outcome grid, routed through the shared decoder. Ground truth for the
// analytic engine on small codes. Throws std::invalid_argument beyond
// the enumeration bound.
TrinaryPairDist enumerate_block(const CodeParams& code, const QubitPairDist& qd);

// Trajectory-level chain simulation: a trajectory fails on the first
// heralded zero; silent flips accumulate as per-basis parities.
struct ChainEstimate {
    long long trajectories = 0;
    long long survivors = 0;
    std::uint64_t x_errors = 0;  // surviving trajectories with odd alpha flips
    std::uint64_t z_errors = 0;

    double p_succ_hat() const {
        return static_cast<double>(survivors) / static_cast<double>(trajectories);
    }
    double q_x_hat() const {
        return survivors == 0 ? 0.0
                              : static_cast<double>(x_errors) / static_cast<double>(survivors);
    }
    double q_z_hat() const {
        return survivors == 0 ? 0.0
                              : static_cast<double>(z_errors) / static_cast<double>(survivors);
    }
};

ChainEstimate simulate_chain(const McConfig& config);

namespace detail {

// SplitMix64: stream seeds derive from (seed, stream index) so parallel
// tallies replay exactly.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed + stream * 0x9E3779B97F4A7C15ull);
}

}  // namespace detail

}  // namespace qpc
