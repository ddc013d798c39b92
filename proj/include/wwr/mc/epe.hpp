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
#include <string>
#include <vector>

#include "wwr/cva.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit/normal.hpp"
#include "wwr/mc/engine.hpp"
#include "wwr/mc/paths.hpp"
#include "wwr/mc/philox.hpp"
#include "wwr/models/gc.hpp"

namespace wwr::mc {

/// E[zeta_t V_t^+] on the grid by joint path simulation.
inline EpeProfile estimate_wwr_epe_mc(const DynamicModel& model, const ExposureSpec& spec, const CreditCurve& curve,
                                      const SimConfig& cfg, const std::vector<double>& grid) {
    const JointSimulator sim(model, spec, curve, grid, cfg.dt);
    const auto bundle = simulate_survival_paths(sim, cfg);
    EpeProfile out;
    out.source = EpeProfile::Source::monte_carlo;
    out.model = std::string(model_name(model));
    out.rho = std::visit([](const auto& p) { return p.rho; }, model);
    out.times = grid;
    for (const auto& s : bundle.stats.wwr_epe) {
        out.values.push_back(s.mean);
        out.std_errors.push_back(s.std_error());
    }
    return out;
}

/// Resampling estimator: V_t(t) = F^{-1}(Phi(rho Phi^{-1}(G(t)) + sqrt(1 - rho^2) Z)).
inline EpeProfile gc_resample_epe_mc(const gc::GcParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                                     const SimConfig& cfg, const std::vector<double>& grid) {
    cfg.validate();
    p.validate();
    const std::size_t n = grid.size();
    std::vector<GaussianMarginal> m;
    std::vector<double> q;
    for (double t : grid) {
        m.push_back(marginal(spec, t));
        q.push_back(t > 0.0 ? curve.survival_quantile(t) : 0.0);
    }
    const double rho_bar = std::sqrt(std::max((1.0 - p.rho) * (1.0 + p.rho), 0.0));
    // F^{-1}(Phi(x)) evaluated on the smaller tail of Phi
    auto sample = [&](std::size_t i, double z) {
        const double x = p.rho * q[i] + rho_bar * z;
        const double quantile = x > 0.0 ? -math::norm_inv_cdf_fast(math::norm_cdf(-x))
                                        : math::norm_inv_cdf_fast(math::norm_cdf(x));
        return std::max(m[i].a + m[i].b * quantile, 0.0);
    };
    struct Acc {
        std::vector<RunningStats> s;
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                s[i].merge(o.s[i]);
            }
        }
    };
    const bool anti = cfg.antithetic;
    auto total = run_units<Acc>(
        cfg.units(), cfg.resolved_threads(), [n] { return Acc{std::vector<RunningStats>(n)}; },
        [&](Acc& acc, std::size_t unit) {
            NormalStream rng(cfg.seed, unit);
            for (std::size_t i = 0; i < n; ++i) {
                const double z = rng.normal();
                double v = sample(i, z);
                if (anti) {
                    v = 0.5 * (v + sample(i, -z));
                }
                acc.s[i].add(v);
            }
        });
    EpeProfile out;
    out.source = EpeProfile::Source::monte_carlo;
    out.model = "gc";
    out.rho = p.rho;
    out.times = grid;
    for (const auto& s : total.s) {
        out.values.push_back(s.mean);
        out.std_errors.push_back(s.std_error());
    }
    return out;
}

}  // namespace wwr::mc
