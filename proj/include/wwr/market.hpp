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
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "wwr/errors.hpp"
#include "wwr/mathkit/normal.hpp"

namespace wwr {

/// Deterministic hazard curve. Flat, or piecewise constant with hazards[i]
/// on (knots[i-1], knots[i]] and the last hazard extended past the last knot.
class CreditCurve {
public:
    static CreditCurve flat(double hazard) { return CreditCurve({}, {hazard}); }

    static CreditCurve piecewise(std::vector<double> knots, std::vector<double> hazards) {
        return CreditCurve(std::move(knots), std::move(hazards));
    }

    bool is_flat() const noexcept { return hazards_.size() == 1; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& hazards() const noexcept { return hazards_; }

    double hazard(double t) const {
        check_time(t);
        const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
        return hazards_[static_cast<std::size_t>(it - knots_.begin())];
    }

    /// H(t) = int_0^t h(s) ds
    double integrated_hazard(double t) const {
        check_time(t);
        double acc = 0.0;
        double prev = 0.0;
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (t <= knots_[i]) {
                return acc + hazards_[i] * (t - prev);
            }
            acc += hazards_[i] * (knots_[i] - prev);
            prev = knots_[i];
        }
        return acc + hazards_.back() * (t - prev);
    }

    double survival(double t) const { return std::exp(-integrated_hazard(t)); }

    /// 1 - G(t) without cancellation for small H.
    double default_probability(double t) const { return -std::expm1(-integrated_hazard(t)); }

    /// Phi^{-1}(G(t)) computed on whichever tail is smaller. Requires t > 0.
    double survival_quantile(double t) const {
        const double g = survival(t);
        const double gbar = default_probability(t);
        if (!(gbar > 0.0)) {
            throw DomainError(detail::concat("survival_quantile: G(", t, ") = 1 has no finite quantile"));
        }
        constexpr double tiny = std::numeric_limits<double>::min();
        if (g < 0.5) {
            return math::norm_inv_cdf(std::max(g, tiny));
        }
        return -math::norm_inv_cdf(gbar);
    }

private:
    CreditCurve(std::vector<double> knots, std::vector<double> hazards)
        : knots_(std::move(knots)), hazards_(std::move(hazards)) {
        if (hazards_.size() != knots_.size() + 1) {
            throw DomainError(detail::concat("CreditCurve: need one more hazard than knots, got ",
                                             hazards_.size(), " hazards and ", knots_.size(), " knots"));
        }
        for (double h : hazards_) {
            if (!(h > 0.0) || !std::isfinite(h)) {
                throw DomainError(detail::concat("CreditCurve: hazard must be > 0, got ", h));
            }
        }
        double prev = 0.0;
        for (double k : knots_) {
            if (!(k > prev)) {
                throw DomainError("CreditCurve: knots must be positive and strictly increasing");
            }
            prev = k;
        }
    }

    static void check_time(double t) {
        if (!(t >= 0.0)) {
            throw DomainError(detail::concat("CreditCurve: time must be >= 0, got ", t));
        }
    }

    std::vector<double> knots_;
    std::vector<double> hazards_;
};

inline double survival(const CreditCurve& curve, double t) { return curve.survival(t); }

enum class ExposureKind { forward, irs };

inline std::string_view to_string(ExposureKind k) { return k == ExposureKind::forward ? "forward" : "irs"; }

struct ExposureSpec {
    ExposureKind kind = ExposureKind::forward;
    double gamma = 0.0;     // IRS moneyness drift, per year^2
    double vartheta = 0.0;  // exposure volatility, per sqrt(year)
    double maturity = 0.0;

    static ExposureSpec forward(double vartheta, double maturity) {
        ExposureSpec s{ExposureKind::forward, 0.0, vartheta, maturity};
        s.validate();
        return s;
    }

    static ExposureSpec irs(double gamma, double vartheta, double maturity) {
        ExposureSpec s{ExposureKind::irs, gamma, vartheta, maturity};
        s.validate();
        return s;
    }

    void validate() const {
        if (!(vartheta >= 0.0) || !std::isfinite(vartheta)) {
            throw DomainError(detail::concat("ExposureSpec: vartheta must be >= 0, got ", vartheta));
        }
        if (!(maturity > 0.0) || !std::isfinite(maturity)) {
            throw DomainError(detail::concat("ExposureSpec: maturity must be > 0, got ", maturity));
        }
        if (!std::isfinite(gamma)) {
            throw DomainError("ExposureSpec: gamma is not finite");
        }
    }
};

/// V_t ~ N(a, b^2)
struct GaussianMarginal {
    double a;
    double b;
};

inline void check_exposure_time(const ExposureSpec& spec, double t) {
    if (!(t >= 0.0 && t <= spec.maturity)) {
        throw DomainError(detail::concat("exposure time ", t, " outside [0, ", spec.maturity, "]"));
    }
}

inline GaussianMarginal marginal(const ExposureSpec& spec, double t) {
    check_exposure_time(spec, t);
    if (spec.kind == ExposureKind::forward) {
        return {0.0, spec.vartheta * std::sqrt(t)};
    }
    const double T = spec.maturity;
    return {spec.gamma * t * (T - t), spec.vartheta * std::sqrt(t * (T - t) / T)};
}

inline double unconditional_epe(const ExposureSpec& spec, double t) {
    const auto m = marginal(spec, t);
    return math::positive_part_mean(m.a, m.b);
}

/// Exact conditional law V_t | V_s = decay * V_s + drift + stdev * Z.
struct ExposureTransition {
    double decay;
    double drift;
    double stdev;
};

inline ExposureTransition exposure_transition(const ExposureSpec& spec, double s, double t) {
    if (!(s >= 0.0 && s < t)) {
        throw DomainError(detail::concat("exposure step needs 0 <= s < t, got s=", s, " t=", t));
    }
    check_exposure_time(spec, t);
    if (spec.kind == ExposureKind::forward) {
        return {1.0, 0.0, spec.vartheta * std::sqrt(t - s)};
    }
    const double T = spec.maturity;
    if (t == T) {
        return {0.0, 0.0, 0.0};
    }
    return {(T - t) / (T - s), spec.gamma * (t - s) * (T - t),
            spec.vartheta * std::sqrt((t - s) * (T - t) / (T - s))};
}

inline double exposure_path_step(const ExposureSpec& spec, double s, double t, double vs, double z) {
    const auto tr = exposure_transition(spec, s, t);
    return tr.decay * vs + tr.drift + tr.stdev * z;
}

/// t_i = i T / n for i = 1..n.
inline std::vector<double> uniform_grid(double horizon, int n) {
    if (n < 1 || !(horizon > 0.0)) {
        throw DomainError(detail::concat("uniform_grid: need n >= 1 and horizon > 0, got n=", n,
                                         " horizon=", horizon));
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        g[static_cast<std::size_t>(i - 1)] = horizon * i / n;
    }
    g.back() = horizon;
    return g;
}

}  // namespace wwr
