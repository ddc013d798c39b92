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
#include <cmath>

#include "wwr/errors.hpp"
#include "wwr/mathkit/quadrature.hpp"

namespace wwr::math {

namespace detail {

// Largest |k*s| handled by the series route.
inline constexpr double kExpintSeriesLimit = 4.0;

inline void check_expint_interval(double lo, double hi) {
    if (!(lo < hi)) {
        throw DomainError(wwr::detail::concat("expint_ratio: need lo < hi, got [", lo, ", ", hi, "]"));
    }
    if (!(lo * hi > 0.0)) {
        throw SingularityError(
            wwr::detail::concat("expint_ratio: interval [", lo, ", ", hi, "] touches or straddles 0"));
    }
}

}  // namespace detail

/// Ei(k*hi) - Ei(k*lo) written as ln(hi/lo) + sum_n k^n (hi^n - lo^n) / (n n!).
/// Euler's constant and the logarithms of k cancel analytically.
inline double expint_ratio_series(double lo, double hi, double k) {
    detail::check_expint_interval(lo, hi);
    double sum = std::log(hi / lo);
    double tl = 1.0;  // (k lo)^n / n!
    double th = 1.0;
    for (int n = 1; n < 200; ++n) {
        tl *= k * lo / n;
        th *= k * hi / n;
        const double term = (th - tl) / n;
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum) && n > 2) {
            break;
        }
    }
    return sum;
}

/// Same integral by adaptive Simpson after s = +-exp(w), which removes the
/// 1/s pole: the integrand becomes exp(k s(w)) in w.
inline double expint_ratio_quadrature(double lo, double hi, double k, double rel_tol = 1e-13) {
    detail::check_expint_interval(lo, hi);
    const bool negative = hi < 0.0;
    const double wa = std::log(negative ? -hi : lo);
    const double wb = std::log(negative ? -lo : hi);
    const double sign = negative ? -1.0 : 1.0;
    auto g = [k, sign](double w) { return std::exp(k * sign * std::exp(w)); };
    // magnitude guess fixes the absolute tolerance handed to Simpson
    const double scale = std::max(std::fabs(integrate(g, wa, wb, QuadratureRule::gauss_legendre(16))), 1e-300);
    const double value = integrate(g, wa, wb, QuadratureRule::adaptive_simpson(rel_tol * scale));
    // for negative intervals ds/s = dw but the orientation flips
    return negative ? -value : value;
}

/// expint_ratio(lo, hi, k) - ln(hi/lo), i.e. the integral of expm1(k s)/s.
/// Callers that add the logarithm back with another weight avoid cancellation.
inline double expint_ratio_minus_log(double lo, double hi, double k) {
    detail::check_expint_interval(lo, hi);
    if (k == 0.0) {
        return 0.0;
    }
    const double reach = std::max(std::fabs(k * lo), std::fabs(k * hi));
    if (reach <= detail::kExpintSeriesLimit) {
        double sum = 0.0;
        double tl = 1.0;
        double th = 1.0;
        for (int n = 1; n < 200; ++n) {
            tl *= k * lo / n;
            th *= k * hi / n;
            const double term = (th - tl) / n;
            sum += term;
            if (std::fabs(term) <= 1e-17 * std::fabs(sum)) {
                break;
            }
        }
        return sum;
    }
    return expint_ratio_quadrature(lo, hi, k) - std::log(hi / lo);
}

/// Integral of exp(k s)/s over [lo, hi]; the interval must not contain 0.
inline double expint_ratio(double lo, double hi, double k) {
    detail::check_expint_interval(lo, hi);
    if (k == 0.0) {
        return std::log(hi / lo);
    }
    const double reach = std::max(std::fabs(k * lo), std::fabs(k * hi));
    if (reach <= detail::kExpintSeriesLimit) {
        return expint_ratio_series(lo, hi, k);
    }
    return expint_ratio_quadrature(lo, hi, k);
}

}  // namespace wwr::math
