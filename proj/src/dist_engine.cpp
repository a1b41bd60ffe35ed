#include "qpc/dist_engine.hpp"

namespace qpc {

TrinaryPairDist row_pair_dist(const CodeParams& code, const QubitPairDist& qd,
                              DistMethod method) {
    const double in[5] = {qd.eps_e, qd.eps_I, qd.eps_X, qd.eps_Y, qd.eps_Z};
    TrinaryPairDist out;
    if (method == DistMethod::dp) {
        detail::row_pair_dp<double>(code.m, in, out.v.data());
    } else {
        detail::row_pair_reference<double>(code.m, in, out.v.data());
    }
    return out;
}

TrinaryPairDist encoded_pair_dist(const CodeParams& code, const TrinaryPairDist& row,
                                  DistMethod method) {
    TrinaryPairDist out;
    if (method == DistMethod::dp) {
        detail::encoded_pair_dp<double>(code.n, row.v.data(), out.v.data());
    } else {
        detail::encoded_pair_reference<double>(code.n, row.v.data(), out.v.data());
    }
    return out;
}

LogicalOutcome logical_outcome(const CodeParams& code, std::span<const PairError> grid) {
    if (grid.size() != static_cast<std::size_t>(code.qubit_count())) {
        throw std::invalid_argument("logical_outcome: grid size must be n*m");
    }
    detail::BlockAccum block;
    std::size_t cell = 0;
    for (int i = 0; i < code.n; ++i) {
        detail::RowAccum row;
        for (int j = 0; j < code.m; ++j) {
            detail::row_accumulate(row, grid[cell++]);
        }
        detail::block_accumulate(block, detail::classify_row(row, code.m));
    }
    return detail::classify_block(block);
}

}  // namespace qpc
