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
#include "wwr/mc/engine.hpp"
#include "wwr/mc/paths.hpp"
#include "wwr/mc/philox.hpp"
#include "wwr/models/ssrd.hpp"

namespace wwr::mc {

struct SsrdCvaResult {
    CvaResult cva;
    EpeProfile profile;
    bool feller = false;
    double negative_lambda_fraction = 0.0;
    std::size_t negative_shift_points = 0;
    std::size_t grid_points = 0;
};

/// CVA by Euler simulation of the CIR++ intensity on the uniform dt grid. The
/// per-path integral of zeta V^+ h G uses the trapezoid rule with f(0) = 0.
inline SsrdCvaResult ssrd_cva(const ssrd::SsrdParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                              const SimConfig& cfg) {
    cfg.validate();
    p.validate();
    const int n = std::max(1, static_cast<int>(std::lround(spec.maturity / cfg.dt)));
    const auto grid = uniform_grid(spec.maturity, n);
    const JointSimulator sim(DynamicModel{p}, spec, curve, grid, cfg.dt);
    std::vector<double> weight(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double left = grid[i] - (i == 0 ? 0.0 : grid[i - 1]);
        const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
        weight[i] = 0.5 * (left + right) * curve.hazard(grid[i]) * curve.survival(grid[i]);
    }
    const std::size_t m = grid.size();
    struct Acc {
        RunningStats cva;
        std::vector<RunningStats> f;
        std::size_t points = 0;
        std::size_t negative_lambda = 0;
        std::vector<PathPoint> a;
        std::vector<PathPoint> b;
        void merge(const Acc& o) {
            cva.merge(o.cva);
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i].merge(o.f[i]);
            }
            points += o.points;
            negative_lambda += o.negative_lambda;
        }
    };
    const bool anti = cfg.antithetic;
    auto total = run_units<Acc>(
        cfg.units(), cfg.resolved_threads(),
        [m] { return Acc{{}, std::vector<RunningStats>(m), 0, 0, std::vector<PathPoint>(m), std::vector<PathPoint>(m)}; },
        [&](Acc& acc, std::size_t unit) {
            NormalStream rng(cfg.seed, unit);
            sim.simulate(rng, 1.0, acc.a, anti ? 2 * unit : unit);
            if (anti) {
                NormalStream rng2(cfg.seed, unit);
                sim.simulate(rng2, -1.0, acc.b, 2 * unit + 1);
            }
            double integral = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double f = acc.a[i].zeta * std::max(acc.a[i].V, 0.0);
                acc.points += 1;
                acc.negative_lambda += acc.a[i].lambda < 0.0;
                if (anti) {
                    f = 0.5 * (f + acc.b[i].zeta * std::max(acc.b[i].V, 0.0));
                    acc.points += 1;
                    acc.negative_lambda += acc.b[i].lambda < 0.0;
                }
                acc.f[i].add(f);
                integral += weight[i] * f;
            }
            acc.cva.add(integral);
        });
    SsrdCvaResult out;
    out.cva.model = "ssrd";
    out.cva.rho = p.rho;
    out.cva.rule = "monte-carlo trapezoid";
    out.cva.cva = total.cva.mean;
    out.cva.std_error = total.cva.std_error();
    out.profile.source = EpeProfile::Source::monte_carlo;
    out.profile.model = "ssrd";
    out.profile.rho = p.rho;
    out.profile.times = grid;
    for (std::size_t i = 0; i < m; ++i) {
        out.cva.samples.push_back({grid[i], total.f[i].mean, weight[i]});
        out.profile.values.push_back(total.f[i].mean);
        out.profile.std_errors.push_back(total.f[i].std_error());
    }
    out.feller = p.feller();
    out.negative_lambda_fraction =
        total.points ? static_cast<double>(total.negative_lambda) / static_cast<double>(total.points) : 0.0;
    for (double phi : sim.reported_shifts()) {
        out.negative_shift_points += phi < 0.0;
    }
    out.grid_points = m;
    return out;
}

}  // namespace wwr::mc
