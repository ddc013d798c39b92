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

#include <optional>
#include <string>
#include <vector>

#include "wwr/market.hpp"
#include "wwr/mathkit/quadrature.hpp"

namespace wwr {

/// One quadrature node: weight already contains h(t) G(t).
struct CvaSample {
    double t;
    double f;
    double weight;
};

struct CvaResult {
    double cva = 0.0;
    std::string model;
    double rho = 0.0;
    std::string rule;
    std::vector<CvaSample> samples;
    std::optional<double> std_error;  // Monte Carlo only
};

struct EpeProfile {
    enum class Source { analytic, monte_carlo };

    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> std_errors;  // empty for analytic profiles
    Source source = Source::analytic;
    std::string model;
    double rho = 0.0;
};

inline math::QuadratureRule default_cva_rule() { return math::QuadratureRule::gauss_legendre(128); }

/// CVA = int_0^T f(t) h(t) G(t) dt with f the conditional EPE.
template <typename F>
CvaResult integrate_cva(F&& f, const ExposureSpec& spec, const CreditCurve& curve,
                        const math::QuadratureRule& rule, std::string model, double rho) {
    auto q = math::integrate_with_samples([&](double t) { return f(t); }, 0.0, spec.maturity, rule);
    CvaResult out;
    out.model = std::move(model);
    out.rho = rho;
    out.rule = rule.describe();
    out.samples.reserve(q.samples.size());
    for (const auto& s : q.samples) {
        const double w = s.weight * curve.hazard(s.x) * curve.survival(s.x);
        out.samples.push_back({s.x, s.value, w});
        out.cva += s.value * w;
    }
    return out;
}

/// CVA without wrong-way risk.
inline CvaResult independent_cva(const ExposureSpec& spec, const CreditCurve& curve,
                                 const math::QuadratureRule& rule = default_cva_rule()) {
    return integrate_cva([&](double t) { return unconditional_epe(spec, t); }, spec, curve, rule,
                         "independent", 0.0);
}

inline EpeProfile unconditional_profile(const ExposureSpec& spec, const std::vector<double>& grid) {
    EpeProfile p;
    p.model = "independent";
    p.times = grid;
    p.values.reserve(grid.size());
    for (double t : grid) {
        p.values.push_back(unconditional_epe(spec, t));
    }
    return p;
}

}  // namespace wwr
