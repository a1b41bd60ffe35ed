#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpc/channel_model.hpp"
#include "qpc/code_params.hpp"
#include "qpc/trinary_dist.hpp"

namespace qpc {

// Effect of the channel on one qubit-pair measurement: heralded erasure,
// faithful outcome, or one of the three silent flips. X flips the Z-side
// outcome, Z flips the X-side outcome, Y flips both.
enum class PairError : std::uint8_t { Erased, I, X, Y, Z };

struct LogicalOutcome {
    int alpha = 0;  // X-side encoded outcome relative to the true value
    int beta = 0;   // Z-side encoded outcome relative to the true value
};

// reference: the literal multinomial sums; dp: the convolution fast path.
enum class DistMethod { reference, dp };

// Feasibility bounds for the reference sums (term count explodes beyond).
inline constexpr int kReferenceMaxRowQubits = 20;
inline constexpr int kReferenceMaxRows = 12;

namespace detail {

// ---------------------------------------------------------------------
// Shared decoder core. Both the analytic engine and the sampling /
// enumeration oracle route outcomes through these pieces, so the
// decoding rule has a single point of truth.
// ---------------------------------------------------------------------

struct RowAccum {
    int losses = 0;    // erased qubits in the row
    int z_flips = 0;   // surviving qubits whose Z vote is flipped (X or Y)
    unsigned x_parity = 0;  // parity of X-product flips (Y or Z)
};

inline void row_accumulate(RowAccum& acc, PairError e) {
    switch (e) {
        case PairError::Erased: ++acc.losses; break;
        case PairError::I: break;
        case PairError::X: ++acc.z_flips; break;
        case PairError::Y: ++acc.z_flips; acc.x_parity ^= 1u; break;
        case PairError::Z: acc.x_parity ^= 1u; break;
    }
}

struct RowOutcome {
    int alpha = 0;
    int beta = 0;
};

// alpha: product over the row, 0 once any qubit is lost, sign given by
// the flip parity. beta: majority of surviving Z votes, lost qubits
// contribute 0, exact tie gives 0.
inline RowOutcome classify_row(const RowAccum& acc, int m) {
    RowOutcome out;
    if (acc.losses >= 1) {
        out.alpha = 0;
    } else {
        out.alpha = acc.x_parity ? -1 : +1;
    }
    const int z_sum = (m - acc.losses) - 2 * acc.z_flips;
    out.beta = z_sum == 0 ? 0 : (z_sum > 0 ? +1 : -1);
    return out;
}

struct BlockAccum {
    int x_tally = 0;        // signed sum of row alpha outcomes
    std::uint8_t z_state = 0;  // 0: even #(-1) rows, 1: odd, 2: some row 0
};

inline void block_accumulate(BlockAccum& acc, RowOutcome row) {
    acc.x_tally += row.alpha;
    if (row.beta == 0) {
        acc.z_state = 2;
    } else if (acc.z_state != 2 && row.beta < 0) {
        acc.z_state ^= 1u;
    }
}

inline LogicalOutcome classify_block(const BlockAccum& acc) {
    LogicalOutcome out;
    out.alpha = acc.x_tally == 0 ? 0 : (acc.x_tally > 0 ? +1 : -1);
    out.beta = acc.z_state == 2 ? 0 : (acc.z_state == 0 ? +1 : -1);
    return out;
}

// ---------------------------------------------------------------------
// Templated engine internals. Real is double in production; tests also
// instantiate exact rationals and compensated doubles. Requirements:
// construction from int, +, +=, *. No division, no transcendentals.
//
// qd layout: [eps_e, eps_I, eps_X, eps_Y, eps_Z].
// q/p layout: TrinaryPairDist flat order, 3*alpha_idx + beta_idx with
// outcome indices 0 -> 0, +1 -> 1, -1 -> 2.
// ---------------------------------------------------------------------

// Row-level DP: convolves m qubits tracking (losses a, z-vote flips k,
// X-flip parity). Gather form with fixed traversal order so results are
// reproducible bit for bit.
template <class Real>
void row_pair_dp(int m, const Real* qd, Real* out) {
    if (m < 1) throw std::invalid_argument("row_pair_dp: m must be >= 1");
    const Real& qe = qd[0];
    const Real& qi = qd[1];
    const Real& qx = qd[2];
    const Real& qy = qd[3];
    const Real& qz = qd[4];

    const int stride = m + 1;
    std::vector<Real> cur(static_cast<std::size_t>(stride) * stride * 2, Real(0));
    std::vector<Real> next(cur.size(), Real(0));
    auto idx = [stride](int a, int k, unsigned par) {
        return (static_cast<std::size_t>(a) * stride + k) * 2 + par;
    };
    cur[idx(0, 0, 0)] = Real(1);

    for (int j = 1; j <= m; ++j) {
        // reachable(step j-1): a + k <= j - 1
        auto old_at = [&](int a, int k, unsigned par) -> Real {
            if (a < 0 || k < 0 || a + k > j - 1) return Real(0);
            return cur[idx(a, k, par)];
        };
        for (int a = 0; a <= j; ++a) {
            for (int k = 0; a + k <= j; ++k) {
                for (unsigned par = 0; par < 2; ++par) {
                    Real acc = qe * old_at(a - 1, k, par);
                    acc += qi * old_at(a, k, par);
                    acc += qx * old_at(a, k - 1, par);
                    acc += qy * old_at(a, k - 1, par ^ 1u);
                    acc += qz * old_at(a, k, par ^ 1u);
                    next[idx(a, k, par)] = acc;
                }
            }
        }
        cur.swap(next);
    }

    for (int i = 0; i < 9; ++i) out[i] = Real(0);
    for (int a = 0; a <= m; ++a) {
        for (int k = 0; a + k <= m; ++k) {
            const int z_sum = (m - a) - 2 * k;
            const int bi = z_sum == 0 ? 0 : (z_sum > 0 ? 1 : 2);
            for (unsigned par = 0; par < 2; ++par) {
                const int ai = a >= 1 ? 0 : (par == 0 ? 1 : 2);
                out[3 * ai + bi] += cur[idx(a, k, par)];
            }
        }
    }
}

// Block-level DP over rows, tracking (signed X tally, Z parity state).
// advance() folds in one more row; current() classifies the prefix, so a
// single scan yields the encoded distribution for every n up to n_max
// with arithmetic identical to a fresh n-row evaluation.
template <class Real>
class EncodedScan {
  public:
    EncodedScan(int n_max, const Real* q) : n_max_(n_max) {
        if (n_max < 1) throw std::invalid_argument("EncodedScan: n_max must be >= 1");
        for (int i = 0; i < 9; ++i) q_[i] = q[i];
        cur_.assign(size(), Real(0));
        next_.assign(size(), Real(0));
        cur_[idx(0, 0)] = Real(1);
    }

    int rows() const { return step_; }

    void advance() {
        if (step_ >= n_max_) throw std::logic_error("EncodedScan: past n_max");
        const int j = step_ + 1;
        for (int t = -j; t <= j; ++t) {
            for (int z = 0; z < 3; ++z) {
                Real acc(0);
                for (int c = 0; c < 9; ++c) {
                    const int ai = c / 3;
                    const int bi = c % 3;
                    const int dt = ai == 0 ? 0 : (ai == 1 ? +1 : -1);
                    const int ts = t - dt;
                    if (ts < -(j - 1) || ts > j - 1) continue;
                    if (z == 2) {
                        // zero-seen: entered by any beta=0 row, or kept
                        if (bi == 0) {
                            acc += q_[c] * cur_[idx(ts, 0)];
                            acc += q_[c] * cur_[idx(ts, 1)];
                            acc += q_[c] * cur_[idx(ts, 2)];
                        } else {
                            acc += q_[c] * cur_[idx(ts, 2)];
                        }
                    } else {
                        if (bi == 1) {  // beta=+1 keeps parity
                            acc += q_[c] * cur_[idx(ts, z)];
                        } else if (bi == 2) {  // beta=-1 flips parity
                            acc += q_[c] * cur_[idx(ts, z ^ 1)];
                        }
                    }
                }
                next_[idx(t, z)] = acc;
            }
        }
        cur_.swap(next_);
        ++step_;
    }

    void current(Real* out) const {
        if (step_ < 1) throw std::logic_error("EncodedScan: no rows folded yet");
        for (int i = 0; i < 9; ++i) out[i] = Real(0);
        for (int t = -step_; t <= step_; ++t) {
            const int ai = t == 0 ? 0 : (t > 0 ? 1 : 2);
            out[3 * ai + 1] += cur_[idx(t, 0)];  // even parity -> beta=+1
            out[3 * ai + 2] += cur_[idx(t, 1)];  // odd parity  -> beta=-1
            out[3 * ai + 0] += cur_[idx(t, 2)];  // zero seen   -> beta=0
        }
    }

  private:
    std::size_t size() const { return static_cast<std::size_t>(2 * n_max_ + 1) * 3; }
    std::size_t idx(int t, int z) const {
        return static_cast<std::size_t>(t + n_max_) * 3 + z;
    }

    int n_max_;
    int step_ = 0;
    Real q_[9];
    std::vector<Real> cur_, next_;
};

template <class Real>
void encoded_pair_dp(int n, const Real* q, Real* out) {
    EncodedScan<Real> scan(n, q);
    for (int i = 0; i < n; ++i) scan.advance();
    scan.current(out);
}

// Pascal triangle in Real; exact for rationals and for doubles within
// the reference feasibility bounds.
template <class Real>
std::vector<std::vector<Real>> binomial_table(int n) {
    std::vector<std::vector<Real>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, Real(1));
        for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

// Literal multinomial sum over error-pattern counts (a losses, b spin
// flips, c spin-and-phase flips, d phase flips) with the outcome
// conditions applied per term.
template <class Real>
void row_pair_reference(int m, const Real* qd, Real* out) {
    if (m < 1) throw std::invalid_argument("row_pair_reference: m must be >= 1");
    if (m > kReferenceMaxRowQubits)
        throw std::invalid_argument("row_pair_reference: m exceeds feasibility bound");

    const auto binom = binomial_table<Real>(m);
    auto powers = [m](const Real& x) {
        std::vector<Real> p(m + 1, Real(1));
        for (int i = 1; i <= m; ++i) p[i] = p[i - 1] * x;
        return p;
    };
    const auto pe = powers(qd[0]);
    const auto pi = powers(qd[1]);
    const auto px = powers(qd[2]);
    const auto py = powers(qd[3]);
    const auto pz = powers(qd[4]);

    for (int i = 0; i < 9; ++i) out[i] = Real(0);
    for (int a = 0; a <= m; ++a) {
        for (int b = 0; a + b <= m; ++b) {
            for (int c = 0; a + b + c <= m; ++c) {
                for (int d = 0; a + b + c + d <= m; ++d) {
                    const int e = m - a - b - c - d;
                    const Real coef = binom[m][a] * binom[m - a][b] *
                                      binom[m - a - b][c] * binom[m - a - b - c][d];
                    const Real term = coef * pe[a] * px[b] * py[c] * pz[d] * pi[e];
                    int ai;
                    if (a >= 1) ai = 0;
                    else ai = (c + d) % 2 == 0 ? 1 : 2;
                    int bi;
                    if (2 * (b + c) == m - a) bi = 0;
                    else bi = 2 * (b + c) < m - a ? 1 : 2;
                    out[3 * ai + bi] += term;
                }
            }
        }
    }
}

// Literal sum over all compositions of n rows into the nine row-outcome
// categories, with the encoded outcome conditions applied per term.
template <class Real>
void encoded_pair_reference(int n, const Real* q, Real* out) {
    if (n < 1) throw std::invalid_argument("encoded_pair_reference: n must be >= 1");
    if (n > kReferenceMaxRows)
        throw std::invalid_argument("encoded_pair_reference: n exceeds feasibility bound");

    const auto binom = binomial_table<Real>(n);
    std::vector<std::vector<Real>> pw(9);
    for (int c = 0; c < 9; ++c) {
        pw[c].assign(n + 1, Real(1));
        for (int i = 1; i <= n; ++i) pw[c][i] = pw[c][i - 1] * q[c];
    }

    for (int i = 0; i < 9; ++i) out[i] = Real(0);
    int counts[9] = {0};
    auto emit = [&](const Real& term) {
        // category flat index: 0:(0,0) 1:(0,+1) 2:(0,-1) 3:(+1,0)
        // 4:(+1,+1) 5:(+1,-1) 6:(-1,0) 7:(-1,+1) 8:(-1,-1)
        const int x_zero = counts[0] + counts[1] + counts[2];
        const int x_plus = counts[3] + counts[4] + counts[5];
        int ai;
        if (2 * x_plus == n - x_zero) ai = 0;
        else ai = 2 * x_plus > n - x_zero ? 1 : 2;
        const int z_zero = counts[0] + counts[3] + counts[6];
        const int z_minus = counts[2] + counts[5] + counts[8];
        int bi;
        if (z_zero >= 1) bi = 0;
        else bi = z_minus % 2 == 0 ? 1 : 2;
        out[3 * ai + bi] += term;
    };
    // recursive composition enumeration with running multinomial weight
    auto rec = [&](auto&& self, int cat, int rem, Real term) -> void {
        if (cat == 8) {
            counts[8] = rem;
            emit(term * pw[8][rem]);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            counts[cat] = k;
            self(self, cat + 1, rem - k, term * binom[rem][k] * pw[cat][k]);
        }
        counts[cat] = 0;
    };
    rec(rec, 0, n, Real(1));
}

}  // namespace detail

// Joint distribution of one row's (X-product, Z-majority) outcome pair.
TrinaryPairDist row_pair_dist(const CodeParams& code, const QubitPairDist& qd,
                              DistMethod method = DistMethod::dp);

// Joint distribution of the encoded block's (M_X, M_Z) outcome pair,
// aggregating n independent rows drawn from the row distribution.
TrinaryPairDist encoded_pair_dist(const CodeParams& code, const TrinaryPairDist& row,
                                  DistMethod method = DistMethod::dp);

// Decode one explicit n*m grid of qubit-pair outcomes (row-major).
LogicalOutcome logical_outcome(const CodeParams& code, std::span<const PairError> grid);

}  // namespace qpc
