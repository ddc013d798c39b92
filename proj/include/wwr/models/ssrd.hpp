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
#include "wwr/market.hpp"

namespace wwr::ssrd {

/// lambda_t = x_t + phi(t), dx = kappa (theta - x) dt + sigma sqrt(x) dW, x_0 = r0.
struct SsrdParams {
    double r0 = 0.01;
    double kappa = 0.35;
    double theta = 0.0012;
    double sigma = 0.02;
    double rho = 0.0;

    void validate() const {
        if (!(r0 > 0.0) || !(kappa > 0.0) || !(theta > 0.0) || !(sigma > 0.0)) {
            throw DomainError(wwr::detail::concat("ssrd: r0, kappa, theta, sigma must be > 0, got (", r0, ", ",
                                                  kappa, ", ", theta, ", ", sigma, ")"));
        }
        if (!(std::fabs(rho) <= 1.0)) {
            throw DomainError(wwr::detail::concat("ssrd: rho must lie in [-1, 1], got ", rho));
        }
    }

    bool feller() const noexcept { return 2.0 * kappa * theta > sigma * sigma; }
};

namespace detail {

struct CirPieces {
    double k;      // sqrt(kappa^2 + 2 sigma^2)
    double em1;    // e^{kt} - 1
    double denom;  // 2k + (kappa + k)(e^{kt} - 1)
};

inline CirPieces pieces(const SsrdParams& p, double t) {
    const double k = std::sqrt(p.kappa * p.kappa + 2.0 * p.sigma * p.sigma);
    const double em1 = std::expm1(k * t);
    return {k, em1, 2.0 * k + (p.kappa + k) * em1};
}

}  // namespace detail

/// Instantaneous forward rate of the CIR core.
inline double cir_forward(const SsrdParams& p, double t) {
    const auto c = detail::pieces(p, t);
    return 2.0 * p.kappa * p.theta * c.em1 / c.denom + p.r0 * 4.0 * c.k * c.k * (c.em1 + 1.0) / (c.denom * c.denom);
}

/// -ln P^CIR(0, t), the integrated CIR forward.
inline double cir_log_discount(const SsrdParams& p, double t) {
    const auto c = detail::pieces(p, t);
    const double log_a = 2.0 * p.kappa * p.theta / (p.sigma * p.sigma) *
                         (std::log(2.0 * c.k) + 0.5 * (p.kappa + c.k) * t - std::log(c.denom));
    const double b = 2.0 * c.em1 / c.denom;
    return -log_a + b * p.r0;
}

/// Deterministic shift fitting the hazard curve: h(t) - f^CIR(0, t).
inline double ssrd_shift_phi(const SsrdParams& p, const CreditCurve& curve, double t) {
    return curve.hazard(t) - cir_forward(p, t);
}

/// int_0^t phi(s) ds = H(t) + ln P^CIR(0, t)
inline double ssrd_integrated_phi(const SsrdParams& p, const CreditCurve& curve, double t) {
    return curve.integrated_hazard(t) - cir_log_discount(p, t);
}

}  // namespace wwr::ssrd
