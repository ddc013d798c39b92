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

#include <cmath>

#include "wwr/errors.hpp"

namespace wwr::math {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

inline double norm_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double norm_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

namespace detail {

// Wichura, AS241 (PPND16). Relative accuracy about 1e-16 over (0,1).
inline double ppnd16(double p) noexcept {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

}  // namespace detail

/// Rational approximation only; used for bulk Monte Carlo draws where p is
/// already strictly inside (0,1).
inline double norm_inv_cdf_fast(double p) noexcept { return detail::ppnd16(p); }

/// Inverse standard normal CDF: rational start plus one Halley step.
/// The step is taken on the smaller tail so that 1-p round-off does not leak in.
inline double norm_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(wwr::detail::concat("norm_inv_cdf: p=", p, " outside (0,1)"));
    }
    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;  // exact for p in (0.5,1)
    double x = detail::ppnd16(tail);
    const double e = norm_cdf(x) - tail;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return upper ? -x : x;
}

/// Inverse of the upper tail: returns x with 1 - Phi(x) = q.
inline double norm_inv_ccdf(double q) { return -norm_inv_cdf(q); }

/// Completed square of phi(a+bx)phi(c+dx) = constant * phi(shift + scale*x).
struct GaussProductSplit {
    double shift;
    double scale;
    double constant;
};

inline GaussProductSplit gauss_product_split(double a, double b, double c, double d) {
    const double s2 = b * b + d * d;
    if (!(s2 > 0.0)) {
        throw DegenerateInputError("gauss_product_split: b and d are both zero", "b^2+d^2");
    }
    const double s = std::sqrt(s2);
    return {(a * b + c * d) / s, s, norm_pdf((a * d - b * c) / s)};
}

/// E[(a + bZ)^+] for Z standard normal; b = 0 takes the deterministic limit.
inline double positive_part_mean(double a, double b) noexcept {
    if (b == 0.0) {
        return a > 0.0 ? a : 0.0;
    }
    const double sb = std::fabs(b);
    const double z = a / sb;
    return sb * norm_pdf(z) + a * norm_cdf(z);
}

}  // namespace wwr::math
