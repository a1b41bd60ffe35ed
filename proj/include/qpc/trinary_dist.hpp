#pragma once

#include <array>
#include <cstddef>

namespace qpc {

// Joint distribution of a trinary outcome pair (alpha, beta), each in
// {0, +1, -1}, relative to the error-free measurement values. alpha is
// the X-side outcome, beta the Z-side outcome; 0 is a heralded failure.
//
// Storage order fixes index 0 -> outcome 0, 1 -> +1, 2 -> -1, with the
// flat index 3*alpha_idx + beta_idx. All aggregate masses are computed
// by direct summation of the addressed entries, never by subtracting
// from 1, so tiny error masses keep full relative accuracy.
struct TrinaryPairDist {
    std::array<double, 9> v{};

    static constexpr int index_of(int outcome) {
        return outcome == 0 ? 0 : (outcome > 0 ? 1 : 2);
    }
    static constexpr std::size_t flat(int alpha, int beta) {
        return static_cast<std::size_t>(3 * index_of(alpha) + index_of(beta));
    }

    double& at(int alpha, int beta) { return v[flat(alpha, beta)]; }
    double at(int alpha, int beta) const { return v[flat(alpha, beta)]; }

    double sum() const {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }

    // Mass of the four fully-resolved outcomes (no heralded zero).
    double success_mass() const {
        return at(+1, +1) + at(+1, -1) + at(-1, +1) + at(-1, -1);
    }

    // Mass of the five outcomes involving a heralded zero.
    double heralded_mass() const {
        return at(0, 0) + at(0, +1) + at(0, -1) + at(+1, 0) + at(-1, 0);
    }

    // Silent logical errors: resolved but wrong in at least one basis.
    double silent_error_mass() const {
        return at(+1, -1) + at(-1, +1) + at(-1, -1);
    }

    // 1 - p(+1,+1) as a direct sum of the eight remaining entries.
    double error_mass() const {
        return heralded_mass() + silent_error_mass();
    }
};

}  // namespace qpc
