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
#include <vector>

#include "wwr/mc/engine.hpp"
#include "wwr/mc/paths.hpp"
#include "wwr/mc/philox.hpp"

namespace wwr::mc {

/// E[zeta_s (zeta_t - zeta_s)] for one pair s < t. Zero under the martingale null.
struct ZetaPairTest {
    double s;
    double t;
    double mean;
    double std_error;
    double z;
};

/// Covariance test of the martingale property of zeta: for every pair of grid
/// times, the sample mean of zeta_s zeta_t - zeta_s^2 and its z-score.
inline std::vector<ZetaPairTest> zeta_martingale_test(const DynamicModel& model, const CreditCurve& curve,
                                                      const std::vector<double>& grid, const SimConfig& cfg) {
    cfg.validate();
    const auto spec = ExposureSpec::forward(0.0, grid.back());
    const JointSimulator sim(model, spec, curve, grid, cfg.dt);
    const std::size_t n = grid.size();
    struct Acc {
        std::vector<RunningStats> d;
        std::vector<PathPoint> a;
        std::vector<PathPoint> b;
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i].merge(o.d[i]);
            }
        }
    };
    const bool anti = cfg.antithetic;
    auto total = run_units<Acc>(
        cfg.units(), cfg.resolved_threads(),
        [n] { return Acc{std::vector<RunningStats>(n * n), std::vector<PathPoint>(n), std::vector<PathPoint>(n)}; },
        [&](Acc& acc, std::size_t unit) {
            NormalStream rng(cfg.seed, unit);
            sim.simulate(rng, 1.0, acc.a, anti ? 2 * unit : unit);
            if (anti) {
                NormalStream rng2(cfg.seed, unit);
                sim.simulate(rng2, -1.0, acc.b, 2 * unit + 1);
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double zs = acc.a[i].zeta;
                    double x = zs * (acc.a[j].zeta - zs);
                    if (anti) {
                        const double ws = acc.b[i].zeta;
                        x = 0.5 * (x + ws * (acc.b[j].zeta - ws));
                    }
                    acc.d[i * n + j].add(x);
                }
            }
        });
    std::vector<ZetaPairTest> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& st = total.d[i * n + j];
            const double se = st.std_error();
            out.push_back({grid[i], grid[j], st.mean, se, se > 0.0 ? st.mean / se : 0.0});
        }
    }
    return out;
}

}  // namespace wwr::mc
