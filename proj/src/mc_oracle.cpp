#include "qpc/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qpc/parallel.hpp"

namespace qpc {

namespace {

constexpr long long kStreamChunk = 1 << 16;

// Category order for sampling thresholds and enumeration: the PairError
// declaration order (Erased, I, X, Y, Z). Fixed so tallies replay.
void category_probs(const QubitPairDist& qd, double out[5]) {
    out[0] = qd.eps_e;
    out[1] = qd.eps_I;
    out[2] = qd.eps_X;
    out[3] = qd.eps_Y;
    out[4] = qd.eps_Z;
}

class GridSampler {
  public:
    GridSampler(const QubitPairDist& qd, std::uint64_t seed) : engine_(seed) {
        double p[5];
        category_probs(qd, p);
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) {
            acc += p[c];
            cum_[c] = acc;
        }
    }

    PairError draw() {
        const double u = uniform();
        if (u < cum_[0]) return PairError::Erased;
        if (u < cum_[1]) return PairError::I;
        if (u < cum_[2]) return PairError::X;
        if (u < cum_[3]) return PairError::Y;
        return PairError::Z;
    }

  private:
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double cum_[4] = {0, 0, 0, 0};
};

long long stream_count(long long samples) {
    return (samples + kStreamChunk - 1) / kStreamChunk;
}

}  // namespace

double McEstimate::std_err(int alpha, int beta) const {
    const double p = p_hat(alpha, beta);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

McEstimate sample_block(const McConfig& config) {
    if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
    const QubitPairDist qd = qubit_pair_dist(config.channel);
    const int cells = config.code.qubit_count();

    const long long streams = stream_count(config.samples);
    std::vector<std::array<std::uint64_t, 9>> tallies(
        static_cast<std::size_t>(streams), std::array<std::uint64_t, 9>{});

    parallel_for(static_cast<int>(streams), config.threads, [&](int s) {
        GridSampler sampler(qd, detail::stream_seed(config.seed, static_cast<std::uint64_t>(s)));
        const long long lo = static_cast<long long>(s) * kStreamChunk;
        const long long count = std::min(kStreamChunk, config.samples - lo);
        std::vector<PairError> grid(static_cast<std::size_t>(cells));
        auto& tally = tallies[static_cast<std::size_t>(s)];
        for (long long it = 0; it < count; ++it) {
            for (int c = 0; c < cells; ++c) grid[static_cast<std::size_t>(c)] = sampler.draw();
            const LogicalOutcome out = logical_outcome(config.code, grid);
            ++tally[TrinaryPairDist::flat(out.alpha, out.beta)];
        }
    });

    McEstimate est;
    est.samples = config.samples;
    for (const auto& tally : tallies) {
        for (int i = 0; i < 9; ++i) est.counts[static_cast<std::size_t>(i)] += tally[static_cast<std::size_t>(i)];
    }
    return est;
}

namespace {

// Depth-first walk over every per-qubit outcome grid, folding rows into
// the block aggregate through the same decoder primitives that
// logical_outcome uses. The last column of each row is unrolled. Bins
// use Kahan compensation: up to 5^12 leaf terms land in one bin, and
// naive accumulation would cost ~1e-11 of the 1e-12 equivalence budget.
struct BlockEnumerator {
    int n = 0;
    int m = 0;
    double prob[5] = {0, 0, 0, 0, 0};
    int active[5] = {0, 0, 0, 0, 0};
    int n_active = 0;
    std::array<double, 9> acc{};
    std::array<double, 9> comp{};

    void run() { descend(0, 0, detail::RowAccum{}, detail::BlockAccum{}, 1.0); }

    void tally(std::size_t idx, double term) {
        const double y = term - comp[idx];
        const double t = acc[idx] + y;
        comp[idx] = (t - acc[idx]) - y;
        acc[idx] = t;
    }

    void descend(int i, int j, detail::RowAccum row, detail::BlockAccum block, double p) {
        if (j == m - 1) {
            for (int t = 0; t < n_active; ++t) {
                const int c = active[t];
                detail::RowAccum r2 = row;
                detail::row_accumulate(r2, static_cast<PairError>(c));
                detail::BlockAccum b2 = block;
                detail::block_accumulate(b2, detail::classify_row(r2, m));
                const double p2 = p * prob[c];
                if (i == n - 1) {
                    const LogicalOutcome out = detail::classify_block(b2);
                    tally(TrinaryPairDist::flat(out.alpha, out.beta), p2);
                } else {
                    descend(i + 1, 0, detail::RowAccum{}, b2, p2);
                }
            }
            return;
        }
        for (int t = 0; t < n_active; ++t) {
            const int c = active[t];
            detail::RowAccum r2 = row;
            detail::row_accumulate(r2, static_cast<PairError>(c));
            descend(i, j + 1, r2, block, p * prob[c]);
        }
    }
};

}  // namespace

TrinaryPairDist enumerate_block(const CodeParams& code, const QubitPairDist& qd) {
    if (code.qubit_count() > kEnumerateMaxQubits) {
        throw std::invalid_argument("enumerate_block: n*m exceeds enumeration bound");
    }
    BlockEnumerator walk;
    walk.n = code.n;
    walk.m = code.m;
    category_probs(qd, walk.prob);
    for (int c = 0; c < 5; ++c) {
        if (walk.prob[c] != 0.0) walk.active[walk.n_active++] = c;
    }
    walk.run();
    TrinaryPairDist out;
    out.v = walk.acc;
    return out;
}

ChainEstimate simulate_chain(const McConfig& config) {
    if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (config.hops < 1) throw std::invalid_argument("hops must be >= 1");
    const QubitPairDist qd = qubit_pair_dist(config.channel);
    const int cells = config.code.qubit_count();

    struct Tally {
        long long survivors = 0;
        std::uint64_t x_errors = 0;
        std::uint64_t z_errors = 0;
    };
    const long long streams = stream_count(config.samples);
    std::vector<Tally> tallies(static_cast<std::size_t>(streams));

    parallel_for(static_cast<int>(streams), config.threads, [&](int s) {
        GridSampler sampler(qd, detail::stream_seed(config.seed, static_cast<std::uint64_t>(s)));
        const long long lo = static_cast<long long>(s) * kStreamChunk;
        const long long count = std::min(kStreamChunk, config.samples - lo);
        std::vector<PairError> grid(static_cast<std::size_t>(cells));
        Tally& tally = tallies[static_cast<std::size_t>(s)];
        for (long long it = 0; it < count; ++it) {
            bool failed = false;
            unsigned x_par = 0;
            unsigned z_par = 0;
            for (int hop = 0; hop < config.hops; ++hop) {
                for (int c = 0; c < cells; ++c) grid[static_cast<std::size_t>(c)] = sampler.draw();
                const LogicalOutcome out = logical_outcome(config.code, grid);
                if (out.alpha == 0 || out.beta == 0) {
                    failed = true;
                    break;
                }
                if (out.alpha < 0) x_par ^= 1u;
                if (out.beta < 0) z_par ^= 1u;
            }
            if (!failed) {
                ++tally.survivors;
                tally.x_errors += x_par;
                tally.z_errors += z_par;
            }
        }
    });

    ChainEstimate est;
    est.trajectories = config.samples;
    for (const Tally& tally : tallies) {
        est.survivors += tally.survivors;
        est.x_errors += tally.x_errors;
        est.z_errors += tally.z_errors;
    }
    return est;
}

}  // namespace qpc
