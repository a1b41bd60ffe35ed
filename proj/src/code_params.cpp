#include "qpc/code_params.hpp"

#include <stdexcept>

namespace qpc {

CodeParams::CodeParams(int n_, int m_) : n(n_), m(m_) {
    if (n < 1 || m < 1) {
        throw std::invalid_argument("CodeParams: n and m must be >= 1");
    }
}

std::string StabilizerDescriptor::to_string() const {
    if (kind == Kind::zz_pair) {
        return "Z(" + std::to_string(row) + "," + std::to_string(col) + ")Z(" +
               std::to_string(row) + "," + std::to_string(col + 1) + ")";
    }
    return "prod_j X(" + std::to_string(row) + ",j)X(" + std::to_string(row + 1) + ",j)";
}

std::vector<StabilizerDescriptor> stabilizer_summary(const CodeParams& code) {
    std::vector<StabilizerDescriptor> out;
    out.reserve(static_cast<std::size_t>(code.stabilizer_count()));
    for (int i = 1; i <= code.n; ++i) {
        for (int j = 1; j <= code.m - 1; ++j) {
            out.push_back({StabilizerDescriptor::Kind::zz_pair, i, j});
        }
    }
    for (int i = 1; i <= code.n - 1; ++i) {
        out.push_back({StabilizerDescriptor::Kind::xx_rows, i, 0});
    }
    return out;
}

ResourceAccount resources(const CodeParams& code, PrepVariant variant) {
    const long long nm = static_cast<long long>(code.n) * code.m;
    ResourceAccount acct;
    acct.memory_qubits_per_station = 2 * nm;
    switch (variant) {
        case PrepVariant::baseline:
            acct.prep_overhead_qubits = 0;
            acct.prep_time_factor = 1;
            break;
        case PrepVariant::parallel_prep:
            acct.prep_overhead_qubits = 4 * nm;
            acct.prep_time_factor = 1;
            break;
        case PrepVariant::serial_prep:
            acct.prep_overhead_qubits = 4 * code.m;
            // n-1 rounds of stabilizer measurement; degenerate n=1 still
            // takes one round
            acct.prep_time_factor = code.n > 1 ? code.n - 1 : 1;
            break;
    }
    return acct;
}

}  // namespace qpc
