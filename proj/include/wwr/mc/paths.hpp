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
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wwr/csv.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit/cholesky.hpp"
#include "wwr/mathkit/expint.hpp"
#include "wwr/mathkit/normal.hpp"
#include "wwr/mc/engine.hpp"
#include "wwr/mc/philox.hpp"
#include "wwr/model_spec.hpp"

namespace wwr::mc {

struct PathPoint {
    double t;
    double S;
    double zeta;
    double lambda;  // NaN for models without an intensity
    double V;
};

namespace detail {

/// Lower factor of a covariance matrix. Zero variances get zero rows; the
/// remaining block goes through the clamped correlation Cholesky.
inline math::Matrix3 factor_cov3(const std::array<std::array<double, 3>, 3>& cov) {
    std::array<double, 3> sd{};
    for (int i = 0; i < 3; ++i) {
        sd[i] = std::sqrt(std::max(cov[i][i], 0.0));
    }
    auto corr = [&](int i, int j) { return sd[i] > 0.0 && sd[j] > 0.0 ? cov[i][j] / (sd[i] * sd[j]) : 0.0; };
    const auto r = math::cholesky3({corr(1, 0), corr(2, 0), corr(2, 1)});
    math::Matrix3 l{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            l[i][j] = sd[i] * r[i][j];
        }
    }
    return l;
}

/// Same for a 2x2 covariance; slot 2 of the result is unused.
inline math::Matrix3 factor_cov2(double var0, double var1, double cov01) {
    return factor_cov3({{{var0, cov01, 0.0}, {cov01, var1, 0.0}, {0.0, 0.0, 0.0}}});
}

}  // namespace detail

/// Exact (HW, CM, Gaussian martingale) or Euler (SSRD) joint simulation of the
/// survival process and the exposure on a reporting grid. The exposure Brownian
/// B and the credit Brownian W have constant correlation rho.
class JointSimulator {
public:
    JointSimulator(DynamicModel model, const ExposureSpec& spec, CreditCurve curve, std::vector<double> grid,
                   double dt = 0.01)
        : model_(std::move(model)), spec_(spec), curve_(std::move(curve)), grid_(std::move(grid)) {
        spec_.validate();
        std::visit([](const auto& p) { p.validate(); }, model_);
        if (grid_.empty()) {
            throw DomainError("JointSimulator: empty grid");
        }
        double prev = 0.0;
        for (double t : grid_) {
            if (!(t > prev)) {
                throw DomainError("JointSimulator: grid must be positive and strictly increasing");
            }
            prev = t;
        }
        if (grid_.back() > spec_.maturity * (1.0 + 1e-12)) {
            throw DomainError(wwr::detail::concat("JointSimulator: grid ends at ", grid_.back(),
                                                  " beyond exposure maturity ", spec_.maturity));
        }
        if (!(dt > 0.0)) {
            throw DomainError("JointSimulator: dt must be > 0");
        }
        build_steps(dt);
    }

    const std::vector<double>& grid() const noexcept { return grid_; }
    const DynamicModel& model() const noexcept { return model_; }
    bool has_lambda() const noexcept {
        return std::holds_alternative<hw::HwParams>(model_) || std::holds_alternative<ssrd::SsrdParams>(model_);
    }
    std::size_t substeps() const noexcept { return steps_.size(); }

    /// Deterministic shift phi(t) used at each reporting time (HW and SSRD).
    std::vector<double> reported_shifts() const {
        std::vector<double> out;
        for (const auto& s : steps_) {
            if (s.report) {
                out.push_back(s.phi);
            }
        }
        return out;
    }

    /// Fills out[i] for grid_[i]. sign = -1 gives the antithetic partner.
    void simulate(NormalStream& rng, double sign, std::span<PathPoint> out, std::size_t path_id = 0) const {
        if (out.size() != grid_.size()) {
            throw DomainError("JointSimulator::simulate: output size does not match grid");
        }
        switch (model_.index()) {
        case 0: run_hw(rng, sign, out, path_id); break;
        case 1: run_cm(rng, sign, out, path_id); break;
        case 2: run_ssrd(rng, sign, out, path_id); break;
        default: run_gm(rng, sign, out, path_id); break;
        }
    }

private:
    struct Step {
        double t0, t1, h;
        ExposureTransition ex;
        math::Matrix3 l;  // innovation factor
        // model-specific transition data
        double decay = 0.0;  // e^{-kappa h} (HW) or e^{mu h} (CM)
        double xi1 = 0.0;
        double tmx = 0.0;
        double dG = 0.0;
        // reporting data at t1
        bool report = false;
        std::size_t index = 0;
        double phi = 0.0;
        double int_phi = 0.0;
        double hG = 1.0;
        double q = 0.0;
        double A = 0.0;
        double mu_t = 0.0;
    };

    ExposureTransition transition(double t0, double t1) const {
        return exposure_transition(spec_, t0, std::min(t1, spec_.maturity));
    }

    /// cov(int_{t0}^{t1} e^{-c (t1 - s)} dW_s, V innovation) / (rho vartheta); c may be
    /// negative and c = 0 gives the plain Brownian increment.
    double kernel_cov(double t0, double t1, double c) const {
        const double h = t1 - t0;
        if (spec_.kind == ExposureKind::forward) {
            if (c == 0.0) {
                return h;
            }
            return -std::expm1(-c * h) / c;
        }
        const double T = spec_.maturity;
        const double tau1 = T - t1;
        const double tau0 = T - t0;
        if (tau1 <= 0.0) {
            return 0.0;
        }
        // tau1 int_{t0}^{t1} e^{-c (t1 - s)} / (T - s) ds, with u = T - s
        return tau1 * std::exp(c * tau1) * math::expint_ratio(tau1, tau0, -c);
    }

    void build_steps(double dt) {
        double t0 = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double t1g = grid_[i];
            std::size_t n_sub = 1;
            if (std::holds_alternative<ssrd::SsrdParams>(model_)) {
                n_sub = static_cast<std::size_t>(std::max(1.0, std::ceil((t1g - t0) / dt - 1e-9)));
            }
            for (std::size_t k = 1; k <= n_sub; ++k) {
                const double a = k == 1 ? t0 : t0 + (t1g - t0) * static_cast<double>(k - 1) / n_sub;
                const double b = k == n_sub ? t1g : t0 + (t1g - t0) * static_cast<double>(k) / n_sub;
                Step s{};
                s.t0 = a;
                s.t1 = b;
                s.h = b - a;
                s.ex = transition(a, b);
                s.report = k == n_sub;
                s.index = i;
                fill_step(s);
                steps_.push_back(s);
            }
            t0 = t1g;
        }
    }

    void fill_step(Step& s) const {
        const double varV = s.ex.stdev * s.ex.stdev;
        const double vth = spec_.vartheta;
        std::visit(
            [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, hw::HwParams>) {
                    const auto w = hw::hw_terms(p.kappa, s.h);
                    const double s2 = p.sigma * p.sigma;
                    s.decay = std::exp(-p.kappa * s.h);
                    s.xi1 = w.xi1;
                    s.tmx = w.t_minus_xi1;
                    const double cv = p.rho * p.sigma * vth;
                    double cov_rV = 0.0;
                    double cov_yV = 0.0;
                    if (spec_.kind == ExposureKind::forward) {
                        cov_rV = cv * w.xi1;
                        cov_yV = cv * w.t_minus_xi1 / p.kappa;
                    } else if (spec_.maturity - s.t1 > 0.0) {
                        const double tau1 = spec_.maturity - s.t1;
                        const double L = std::log((spec_.maturity - s.t0) / tau1);
                        const double ex = math::expint_ratio_minus_log(s.t0 - spec_.maturity, s.t1 - spec_.maturity,
                                                                       p.kappa);
                        const double g = std::exp(p.kappa * tau1);
                        cov_rV = cv * tau1 * g * (L - ex);
                        cov_yV = cv * tau1 / p.kappa * (g * ex - std::expm1(p.kappa * tau1) * L);
                    }
                    const double cov_ry = 0.5 * s2 * w.xi1 * w.xi1;
                    s.l = detail::factor_cov3({{{s2 * w.xi2, cov_ry, cov_rV},
                                                {cov_ry, s2 * w.d / (p.kappa * p.kappa), cov_yV},
                                                {cov_rV, cov_yV, varV}}});
                    if (s.report) {
                        s.phi = hw::hw_shift_phi(p, curve_, s.t1);
                        s.int_phi = hw::hw_integrated_phi(p, curve_, s.t1);
                        s.hG = curve_.hazard(s.t1) * curve_.survival(s.t1);
                    }
                } else if constexpr (std::is_same_v<P, cm::CmParams>) {
                    const double mu = p.mu();
                    s.decay = std::exp(mu * s.h);
                    const double cov = p.brownian_rho() * p.sigma * vth * kernel_cov(s.t0, s.t1, -mu);
                    s.l = detail::factor_cov2(std::expm1(p.sigma * p.sigma * s.h), varV, cov);
                    if (s.report) {
                        s.q = curve_.survival_quantile(s.t1);
                        s.mu_t = mu * s.t1;
                        s.A = s.q * std::exp(s.mu_t);
                    }
                } else if constexpr (std::is_same_v<P, ssrd::SsrdParams>) {
                    const double cov = p.rho * vth * kernel_cov(s.t0, s.t1, 0.0);
                    s.l = detail::factor_cov2(s.h, varV, cov);
                    if (s.report) {
                        s.phi = ssrd::ssrd_shift_phi(p, curve_, s.t1);
                        s.int_phi = ssrd::ssrd_integrated_phi(p, curve_, s.t1);
                        s.hG = curve_.hazard(s.t1) * curve_.survival(s.t1);
                    }
                } else {
                    const double cov = p.rho * vth * kernel_cov(s.t0, s.t1, 0.0);
                    s.l = detail::factor_cov2(s.h, varV, cov);
                    s.dG = curve_.survival(s.t1) - curve_.survival(s.t0);
                }
            },
            model_);
    }

    static void check(const PathPoint& pt, std::size_t path_id, std::size_t step) {
        if (!std::isfinite(pt.S) || !std::isfinite(pt.zeta) || !std::isfinite(pt.V)) {
            throw SimulationError(wwr::detail::concat("non-finite state at t=", pt.t, " on path ", path_id), path_id,
                                  step);
        }
    }

    void run_hw(NormalStream& rng, double sign, std::span<PathPoint> out, std::size_t path_id) const {
        const auto& p = std::get<hw::HwParams>(model_);
        double r = p.r0;
        double y = 0.0;
        double v = 0.0;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            const auto& s = steps_[k];
            const double z0 = sign * rng.normal();
            const double z1 = sign * rng.normal();
            const double z2 = sign * rng.normal();
            const double er = s.l[0][0] * z0;
            const double ey = s.l[1][0] * z0 + s.l[1][1] * z1;
            const double ev = s.l[2][0] * z0 + s.l[2][1] * z1 + s.l[2][2] * z2;
            y += r * s.xi1 + p.theta * s.tmx + ey;
            r = r * s.decay + p.theta * (1.0 - s.decay) + er;
            v = s.ex.decay * v + s.ex.drift + ev;
            if (s.report) {
                PathPoint pt{s.t1, std::exp(-y - s.int_phi), 0.0, r + s.phi, v};
                pt.zeta = pt.lambda * pt.S / s.hG;
                check(pt, path_id, k);
                out[s.index] = pt;
            }
        }
    }

    void run_cm(NormalStream& rng, double sign, std::span<PathPoint> out, std::size_t path_id) const {
        double u = 0.0;
        double v = 0.0;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            const auto& s = steps_[k];
            const double z0 = sign * rng.normal();
            const double z1 = sign * rng.normal();
            u = s.decay * u + s.l[0][0] * z0;
            v = s.ex.decay * v + s.ex.drift + s.l[1][0] * z0 + s.l[1][1] * z1;
            if (s.report) {
                const double x = s.A + u;
                PathPoint pt{s.t1, math::norm_cdf(x), std::exp(s.mu_t + 0.5 * (s.q - x) * (s.q + x)),
                             std::numeric_limits<double>::quiet_NaN(), v};
                check(pt, path_id, k);
                out[s.index] = pt;
            }
        }
    }

    void run_ssrd(NormalStream& rng, double sign, std::span<PathPoint> out, std::size_t path_id) const {
        const auto& p = std::get<ssrd::SsrdParams>(model_);
        double x = p.r0;
        double y = 0.0;
        double v = 0.0;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            const auto& s = steps_[k];
            const double z0 = sign * rng.normal();
            const double z1 = sign * rng.normal();
            const double dw = s.l[0][0] * z0;
            const double xp = std::max(x, 0.0);
            // full truncation: x^+ in drift and diffusion, raw x carried
            const double xn = x + p.kappa * (p.theta - xp) * s.h + p.sigma * std::sqrt(xp) * dw;
            y += 0.5 * (xp + std::max(xn, 0.0)) * s.h;
            x = xn;
            v = s.ex.decay * v + s.ex.drift + s.l[1][0] * z0 + s.l[1][1] * z1;
            if (s.report) {
                PathPoint pt{s.t1, std::exp(-y - s.int_phi), 0.0, std::max(x, 0.0) + s.phi, v};
                pt.zeta = pt.lambda * pt.S / s.hG;
                check(pt, path_id, k);
                out[s.index] = pt;
            }
        }
    }

    void run_gm(NormalStream& rng, double sign, std::span<PathPoint> out, std::size_t path_id) const {
        const auto& p = std::get<gm::GaussianMartingaleParams>(model_);
        double S = 1.0;
        double v = 0.0;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            const auto& s = steps_[k];
            const double z0 = sign * rng.normal();
            const double z1 = sign * rng.normal();
            S += s.dG + p.sigma * s.l[0][0] * z0;
            v = s.ex.decay * v + s.ex.drift + s.l[1][0] * z0 + s.l[1][1] * z1;
            if (s.report) {
                PathPoint pt{s.t1, S, 1.0, std::numeric_limits<double>::quiet_NaN(), v};
                check(pt, path_id, k);
                out[s.index] = pt;
            }
        }
    }

    DynamicModel model_;
    ExposureSpec spec_;
    CreditCurve curve_;
    std::vector<double> grid_;
    std::vector<Step> steps_;
};

/// Per-time Monte Carlo statistics and range diagnostics over all paths.
struct PathStats {
    std::vector<RunningStats> S;
    std::vector<RunningStats> zeta;
    std::vector<RunningStats> wwr_epe;  // zeta V^+
    std::vector<RunningStats> epe;      // V^+
    std::size_t points = 0;
    std::size_t s_below_zero = 0;
    std::size_t s_above_one = 0;
    std::size_t negative_lambda = 0;
    std::size_t negative_zeta = 0;
    double min_S = std::numeric_limits<double>::infinity();
    double max_S = -std::numeric_limits<double>::infinity();

    explicit PathStats(std::size_t n = 0) : S(n), zeta(n), wwr_epe(n), epe(n) {}

    void merge(const PathStats& o) {
        for (std::size_t i = 0; i < S.size(); ++i) {
            S[i].merge(o.S[i]);
            zeta[i].merge(o.zeta[i]);
            wwr_epe[i].merge(o.wwr_epe[i]);
            epe[i].merge(o.epe[i]);
        }
        points += o.points;
        s_below_zero += o.s_below_zero;
        s_above_one += o.s_above_one;
        negative_lambda += o.negative_lambda;
        negative_zeta += o.negative_zeta;
        min_S = std::min(min_S, o.min_S);
        max_S = std::max(max_S, o.max_S);
    }

    void count(const PathPoint& p) {
        ++points;
        s_below_zero += p.S < 0.0;
        s_above_one += p.S > 1.0;
        negative_lambda += p.lambda < 0.0;
        negative_zeta += p.zeta < 0.0;
        min_S = std::min(min_S, p.S);
        max_S = std::max(max_S, p.S);
    }
};

struct PathBundle {
    std::string model;
    bool has_lambda = false;
    std::vector<double> times;
    std::vector<std::size_t> path_ids;
    std::vector<std::vector<PathPoint>> paths;  // first keep_paths paths only
    PathStats stats;
};

/// Simulates cfg.n_paths paths, keeps the first keep_paths of them and
/// accumulates per-time statistics over all of them.
inline PathBundle simulate_survival_paths(const JointSimulator& sim, const SimConfig& cfg,
                                          std::size_t keep_paths = 0) {
    cfg.validate();
    const std::size_t n = sim.grid().size();
    struct Acc {
        PathStats stats;
        std::vector<std::pair<std::size_t, std::vector<PathPoint>>> kept;
        std::vector<PathPoint> a;
        std::vector<PathPoint> b;
        void merge(const Acc& o) {
            stats.merge(o.stats);
            kept.insert(kept.end(), o.kept.begin(), o.kept.end());
        }
    };
    auto make = [n] {
        Acc acc{PathStats(n), {}, std::vector<PathPoint>(n), std::vector<PathPoint>(n)};
        return acc;
    };
    const bool anti = cfg.antithetic;
    auto body = [&](Acc& acc, std::size_t unit) {
        NormalStream rng(cfg.seed, unit);
        const std::size_t id_a = anti ? 2 * unit : unit;
        sim.simulate(rng, 1.0, acc.a, id_a);
        if (anti) {
            NormalStream rng2(cfg.seed, unit);
            sim.simulate(rng2, -1.0, acc.b, id_a + 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = acc.a[i];
            double s = p.S;
            double z = p.zeta;
            double vp = std::max(p.V, 0.0);
            double w = z * vp;
            acc.stats.count(p);
            if (anti) {
                const auto& q = acc.b[i];
                acc.stats.count(q);
                const double vq = std::max(q.V, 0.0);
                s = 0.5 * (s + q.S);
                w = 0.5 * (w + q.zeta * vq);
                z = 0.5 * (z + q.zeta);
                vp = 0.5 * (vp + vq);
            }
            acc.stats.S[i].add(s);
            acc.stats.zeta[i].add(z);
            acc.stats.wwr_epe[i].add(w);
            acc.stats.epe[i].add(vp);
        }
        if (id_a < keep_paths) {
            acc.kept.emplace_back(id_a, acc.a);
        }
        if (anti && id_a + 1 < keep_paths) {
            acc.kept.emplace_back(id_a + 1, acc.b);
        }
    };
    Acc total = run_units<Acc>(cfg.units(), cfg.resolved_threads(), make, body);
    PathBundle out;
    out.model = std::string(model_name(sim.model()));
    out.has_lambda = sim.has_lambda();
    out.times = sim.grid();
    out.stats = std::move(total.stats);
    for (auto& [id, pts] : total.kept) {
        out.path_ids.push_back(id);
        out.paths.push_back(std::move(pts));
    }
    return out;
}

/// Columns t,path_id,S,zeta and, for intensity models, lambda,V.
inline void write_paths_csv(const PathBundle& b, std::ostream& os, int precision = 12) {
    os << (b.has_lambda ? "t,path_id,S,zeta,lambda,V\n" : "t,path_id,S,zeta\n");
    for (std::size_t i = 0; i < b.times.size(); ++i) {
        for (std::size_t k = 0; k < b.paths.size(); ++k) {
            const auto& p = b.paths[k][i];
            os << csv::format(p.t, precision) << ',' << b.path_ids[k] << ',' << csv::format(p.S, precision) << ','
               << csv::format(p.zeta, precision);
            if (b.has_lambda) {
                os << ',' << csv::format(p.lambda, precision) << ',' << csv::format(p.V, precision);
            }
            os << '\n';
        }
    }
}

}  // namespace wwr::mc
