#pragma once

#include <string>
#include <vector>

namespace qpc {

// An (n,m) quantum parity code: n sub-blocks (rows), each of m qubits
// (columns). The first index is always the sub-block count; the row
// direction carries the X majority vote, the column direction the Z
// majority vote.
struct CodeParams {
    int n = 1;
    int m = 1;

    CodeParams(int n_, int m_);

    int qubit_count() const { return n * m; }
    int distance() const { return n < m ? n : m; }
    int stabilizer_count() const { return n * m - 1; }
};

// Symbolic stabilizer descriptor, for documentation and test assertions.
// zz_pair: Z(row,col) Z(row,col+1).  xx_rows: prod_j X(row,j) X(row+1,j).
struct StabilizerDescriptor {
    enum class Kind { zz_pair, xx_rows };
    Kind kind;
    int row = 0;  // 1-based; for xx_rows this is the upper of the two rows
    int col = 0;  // 1-based; unused for xx_rows

    std::string to_string() const;
};

// All n*m - 1 independent stabilizers: n*(m-1) ZZ pairs followed by
// n-1 row-product XX operators.
std::vector<StabilizerDescriptor> stabilizer_summary(const CodeParams& code);

// Qubit accounting for the fault-tolerant Bell-pair preparation schemes.
// The cost function always charges 2nm memory qubits per station; the
// preparation overhead is reported separately and never enters the cost.
enum class PrepVariant { baseline, parallel_prep, serial_prep };

struct ResourceAccount {
    long long memory_qubits_per_station = 0;
    long long prep_overhead_qubits = 0;
    long long prep_time_factor = 1;
};

ResourceAccount resources(const CodeParams& code, PrepVariant variant);

}  // namespace qpc
