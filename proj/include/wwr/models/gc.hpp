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
#include <vector>

#include "wwr/cva.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit/normal.hpp"

namespace wwr::gc {

struct GcParams {
    double rho = 0.0;

    void validate() const {
        if (!(std::fabs(rho) <= 1.0)) {
            throw DomainError(wwr::detail::concat("gc: rho must lie in [-1, 1], got ", rho));
        }
    }
};

/// Law of V_t given tau = t under the Gaussian copula: N(a_tilde, b_tilde^2).
struct ConditionalMarginal {
    double a_tilde;
    double b_tilde;
};

inline ConditionalMarginal gc_conditional_marginal(const GcParams& p, const ExposureSpec& spec,
                                                   const CreditCurve& curve, double t) {
    p.validate();
    const auto m = marginal(spec, t);
    if (m.b == 0.0 || p.rho == 0.0) {
        return {m.a, m.b};
    }
    const double q = curve.survival_quantile(t);
    const double rho_bar = std::abs(p.rho) == 1.0 ? 0.0 : std::sqrt((1.0 - p.rho) * (1.0 + p.rho));
    return {m.a + p.rho * q * m.b, m.b * rho_bar};
}

/// G(t)-quantile branches q_+ (rho = 1) and q_- (rho = -1) of V_t.
inline double gc_quantile(const ExposureSpec& spec, const CreditCurve& curve, double t, double sign) {
    const auto m = marginal(spec, t);
    if (m.b == 0.0) {
        return m.a;
    }
    return m.a + sign * curve.survival_quantile(t) * m.b;
}

inline double gc_wwr_epe(const GcParams& p, const ExposureSpec& spec, const CreditCurve& curve, double t) {
    p.validate();
    if (p.rho == 1.0 || p.rho == -1.0) {
        return std::max(gc_quantile(spec, curve, t, p.rho), 0.0);
    }
    const auto c = gc_conditional_marginal(p, spec, curve, t);
    return math::positive_part_mean(c.a_tilde, c.b_tilde);
}

inline EpeProfile gc_profile(const GcParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                             const std::vector<double>& grid) {
    EpeProfile out;
    out.model = "gc";
    out.rho = p.rho;
    out.times = grid;
    for (double t : grid) {
        out.values.push_back(gc_wwr_epe(p, spec, curve, t));
    }
    return out;
}

inline CvaResult gc_cva(const GcParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                        const math::QuadratureRule& rule = default_cva_rule()) {
    p.validate();
    return integrate_cva([&](double t) { return gc_wwr_epe(p, spec, curve, t); }, spec, curve, rule, "gc",
                         p.rho);
}

}  // namespace wwr::gc
