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
#include <vector>

#include "wwr/cva.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit/expint.hpp"
#include "wwr/mathkit/normal.hpp"

namespace wwr::cm {

/// paper: the user-facing rho is the negative of the Brownian correlation, so
/// that positive rho means wrong-way risk. raw: rho is the Brownian correlation.
enum class SignConvention { paper, raw };

inline std::string_view to_string(SignConvention c) { return c == SignConvention::paper ? "paper" : "raw"; }

/// S_t = Phi(X_t), dX = (sigma^2/2) X dt + sigma dW.
struct CmParams {
    double sigma = 0.9;
    double rho = 0.0;
    SignConvention convention = SignConvention::paper;

    double mu() const noexcept { return 0.5 * sigma * sigma; }
    double brownian_rho() const noexcept { return convention == SignConvention::paper ? -rho : rho; }

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw DomainError(wwr::detail::concat("cm: sigma must be > 0, got ", sigma));
        }
        if (!(std::fabs(rho) <= 1.0)) {
            throw DomainError(wwr::detail::concat("cm: rho must lie in [-1, 1], got ", rho));
        }
    }
};

/// X_t ~ A + B Z and k = e^{mu t} / phi(Phi^{-1}(G(t))).
struct CmMarginal {
    double A;
    double B;
    double k;
    double q;  // Phi^{-1}(G(t))
};

inline CmMarginal cm_marginal(const CmParams& p, const CreditCurve& curve, double t) {
    p.validate();
    if (t == 0.0) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, 0.0, 1.0, inf};
    }
    const double q = curve.survival_quantile(t);
    const double growth = std::exp(p.mu() * t);
    return {q * growth, std::sqrt(std::expm1(p.sigma * p.sigma * t)), growth / math::norm_pdf(q), q};
}

/// Correlation of X_t and V_t before clamping.
inline double cm_rho_unclamped(const CmParams& p, const ExposureSpec& spec, double t) {
    p.validate();
    const double T = spec.maturity;
    const bool irs = spec.kind == ExposureKind::irs;
    if (!(t > 0.0) || t > T || (irs && t == T)) {
        throw DomainError(wwr::detail::concat("cm_rho: t=", t, " outside (0, ", T, ")"));
    }
    const double s = p.sigma;
    const double r = p.brownian_rho();
    const double mu = p.mu();
    if (!irs) {
        return 2.0 * r * std::expm1(mu * t) / (s * std::sqrt(t * std::expm1(s * s * t)));
    }
    const double tau = T - t;
    return s * r * std::exp(-mu * T) * std::sqrt(T * tau / (t * -std::expm1(-s * s * t))) *
           math::expint_ratio(tau, T, mu);
}

inline double cm_rho(const CmParams& p, const ExposureSpec& spec, double t) {
    return std::clamp(cm_rho_unclamped(p, spec, t), -1.0, 1.0);
}

/// zeta_t = e^{mu t} phi(Phi^{-1}(S)) / phi(Phi^{-1}(G(t)))
inline double cm_zeta(const CmParams& p, const CreditCurve& curve, double t, double S) {
    p.validate();
    if (!(S > 0.0 && S < 1.0)) {
        throw DomainError(wwr::detail::concat("cm_zeta: S=", S, " outside (0, 1)"));
    }
    if (t == 0.0) {
        return 1.0;
    }
    const double q = curve.survival_quantile(t);
    const double x = math::norm_inv_cdf(S);
    return std::exp(p.mu() * t + 0.5 * (q - x) * (q + x));
}

/// E[zeta V^+] after tilting X by phi(X): V ~ N(m, s^2) with mass K / beta.
/// Valid for every |rho(t)| <= 1 and used as the limit branch at |rho(t)| = 1.
inline double cm_wwr_epe_tilted(double a, double b, double r, const CmMarginal& mg) {
    const double beta2 = mg.B * mg.B + 1.0;
    const double beta = std::sqrt(beta2);
    const double K = mg.k * math::norm_pdf(mg.A / beta);
    const double m = a - b * r * mg.A * mg.B / beta2;
    const double s = b * std::sqrt(std::max(1.0 - r * r * mg.B * mg.B / beta2, 0.0));
    return K / beta * math::positive_part_mean(m, s);
}

/// Closed form of f(t) = E[zeta_t V_t^+]. Local names follow the appendix with a
/// cm_ prefix where the letters clash with model parameters:
///   cm_alpha = A B / sqrt(B^2+1), cm_beta = sqrt(B^2+1), cm_beta_t = rho / rho_bar,
///   cm_z = mu / sqrt(1 + sigma^2) of the appendix.
inline double cm_wwr_epe(const CmParams& p, const ExposureSpec& spec, const CreditCurve& curve, double t) {
    p.validate();
    const auto m = marginal(spec, t);
    if (m.b == 0.0) {
        return std::max(m.a, 0.0);
    }
    const auto mg = cm_marginal(p, curve, t);
    const double r = cm_rho(p, spec, t);
    const double a = m.a;
    const double b = m.b;
    if (std::fabs(r) > 1.0 - 1e-12) {
        return cm_wwr_epe_tilted(a, b, r, mg);
    }
    const double B2 = mg.B * mg.B;
    const double cm_beta2 = B2 + 1.0;
    const double cm_beta = std::sqrt(cm_beta2);
    const double cm_alpha = mg.A * mg.B / cm_beta;
    const double rho_bar = std::sqrt((1.0 - r) * (1.0 + r));
    const double cm_beta_t = r / rho_bar;
    const double cm_z = (a / b * cm_beta2 - r * mg.A * mg.B) / (cm_beta * std::sqrt(1.0 - r * r * B2 + B2));
    const double K = mg.k * math::norm_pdf(mg.A / cm_beta);
    return K * ((cm_beta * a - cm_alpha * b * r) / cm_beta2 * math::norm_cdf(cm_z) +
                b / std::sqrt(cm_beta2 + cm_beta_t * cm_beta_t) * (cm_beta_t * r / cm_beta2 + rho_bar) *
                    math::norm_pdf(cm_z));
}

inline EpeProfile cm_profile(const CmParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                             const std::vector<double>& grid) {
    EpeProfile out;
    out.model = "cm";
    out.rho = p.rho;
    out.times = grid;
    for (double t : grid) {
        out.values.push_back(cm_wwr_epe(p, spec, curve, t));
    }
    return out;
}

inline CvaResult cm_cva(const CmParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                        const math::QuadratureRule& rule = default_cva_rule()) {
    p.validate();
    return integrate_cva([&](double t) { return cm_wwr_epe(p, spec, curve, t); }, spec, curve, rule, "cm", p.rho);
}

}  // namespace wwr::cm
