/*
   Copyright 2026 The wwr-cva Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "wwr/errors.hpp"

namespace wwr::math {

/// Off-diagonal entries of a symmetric 3x3 matrix with unit diagonal.
struct CorrMatrix3 {
    double r12 = 0.0;
    double r13 = 0.0;
    double r23 = 0.0;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kCorrelationClamp = 1e-12;
inline constexpr double kPsdTolerance = 1e-12;

/// Values within 1e-12 of +-1 are pulled to +-(1 - 1e-12); anything beyond
/// [-1, 1] by more than that is rejected.
inline double clamp_correlation(double r) {
    if (!std::isfinite(r) || std::fabs(r) > 1.0 + kCorrelationClamp) {
        throw DomainError(wwr::detail::concat("correlation ", r, " outside [-1, 1]"));
    }
    const double limit = 1.0 - kCorrelationClamp;
    return std::fabs(r) > limit ? std::copysign(limit, r) : r;
}

/// Lower-triangular R with R R^T equal to the (clamped) input.
inline Matrix3 cholesky3(const CorrMatrix3& m) {
    const double r12 = clamp_correlation(m.r12);
    const double r13 = clamp_correlation(m.r13);
    const double r23 = clamp_correlation(m.r23);

    Matrix3 r{};
    r[0][0] = 1.0;
    r[1][0] = r12;
    const double d2 = 1.0 - r12 * r12;
    if (d2 < -kPsdTolerance) {
        throw NotPsdError(wwr::detail::concat("cholesky3: negative pivot 2 (", d2, ")"), 2, d2);
    }
    r[1][1] = std::sqrt(std::max(d2, 0.0));
    r[2][0] = r13;
    const double num = r23 - r13 * r12;
    if (r[1][1] > 0.0) {
        r[2][1] = num / r[1][1];
    } else if (std::fabs(num) <= kPsdTolerance) {
        r[2][1] = 0.0;
    } else {
        throw NotPsdError(wwr::detail::concat("cholesky3: zero pivot 2 with residual ", num), 2, 0.0);
    }
    const double d3 = 1.0 - r13 * r13 - r[2][1] * r[2][1];
    if (d3 < -kPsdTolerance) {
        throw NotPsdError(wwr::detail::concat("cholesky3: negative pivot 3 (", d3, ")"), 3, d3);
    }
    r[2][2] = std::sqrt(std::max(d3, 0.0));
    return r;
}

}  // namespace wwr::math
