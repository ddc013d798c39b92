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
#include <string_view>
#include <utility>
#include <vector>

#include "wwr/cva.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit/cholesky.hpp"
#include "wwr/mathkit/expint.hpp"
#include "wwr/mathkit/normal.hpp"

namespace wwr::hw {

/// lambda_t = r_t + phi(t) with dr = kappa (theta - r) dt + sigma dW, r_0 = r0.
struct HwParams {
    double kappa = 0.005;
    double theta = 0.0;
    double sigma = 0.04;
    double r0 = 0.0;
    double rho = 0.0;
    double phi_bump = 0.0;  // added to phi(t); non-zero only for fault injection

    void validate() const {
        if (!(kappa > 0.0) || !std::isfinite(kappa)) {
            throw DomainError(wwr::detail::concat("hw: kappa must be > 0, got ", kappa));
        }
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
            throw DomainError(wwr::detail::concat("hw: sigma must be >= 0, got ", sigma));
        }
        if (!(std::fabs(rho) <= 1.0)) {
            throw DomainError(wwr::detail::concat("hw: rho must lie in [-1, 1], got ", rho));
        }
        if (!std::isfinite(theta) || !std::isfinite(r0) || !std::isfinite(phi_bump)) {
            throw DomainError("hw: theta, r0 and phi_bump must be finite");
        }
    }
};

enum class CorrMode { paper, exact };

inline std::string_view to_string(CorrMode m) { return m == CorrMode::paper ? "paper" : "exact"; }

/// (1 - exp(-x kappa t)) / (x kappa)
inline double xi(double x, double t, double kappa) {
    const double u = x * kappa * t;
    if (std::fabs(u) < 1e-8) {
        return t * (1.0 - u / 2.0 + u * u / 6.0);
    }
    return -std::expm1(-u) / (x * kappa);
}

/// The deterministic pieces shared by marginals, correlations and the exact step.
struct HwTerms {
    double xi1;
    double xi2;
    double d;            // t - 2 xi1 + xi2
    double t_minus_xi1;  // t - xi1
};

inline HwTerms hw_terms(double kappa, double t) {
    const double u = kappa * t;
    HwTerms r{xi(1.0, t, kappa), xi(2.0, t, kappa), 0.0, 0.0};
    if (u <= 0.5) {
        // kappa D = sum_{n>=3} (-1)^n (2 - 2^{n-1}) u^n / n!
        double p = u * u / 2.0;  // u^n / n!
        double pow2 = 2.0;       // 2^{n-1}
        double sd = 0.0;
        double sx = p;  // kappa (t - xi1) = sum_{n>=2} (-1)^n u^n / n!
        for (int n = 3; n < 60; ++n) {
            p *= u / n;
            pow2 *= 2.0;
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            sd += sign * (2.0 - pow2) * p;
            sx += sign * p;
            if (pow2 * p < 1e-18 * sd) {
                break;
            }
        }
        r.d = sd / kappa;
        r.t_minus_xi1 = sx / kappa;
    } else {
        r.d = (u + 2.0 * std::expm1(-u) - 0.5 * std::expm1(-2.0 * u)) / kappa;
        r.t_minus_xi1 = (u + std::expm1(-u)) / kappa;
    }
    return r;
}

inline double hw_shift_phi(const HwParams& p, const CreditCurve& curve, double t) {
    p.validate();
    const double x1 = xi(1.0, t, p.kappa);
    return curve.hazard(t) + 0.5 * p.sigma * p.sigma * x1 * x1 - p.theta * p.kappa * x1 -
           p.r0 * std::exp(-p.kappa * t) + p.phi_bump;
}

/// int_0^t phi(s) ds
inline double hw_integrated_phi(const HwParams& p, const CreditCurve& curve, double t) {
    const auto w = hw_terms(p.kappa, t);
    const double k2 = p.kappa * p.kappa;
    return curve.integrated_hazard(t) + 0.5 * p.sigma * p.sigma * w.d / k2 - p.theta * w.t_minus_xi1 -
           p.r0 * w.xi1 + p.phi_bump * t;
}

/// lambda_t ~ N(A, B^2), Lambda_t = int lambda ~ N(omega, Omega^2)
struct HwMarginals {
    double A;
    double B;
    double omega;
    double Omega;
};

inline HwMarginals hw_marginals(const HwParams& p, const CreditCurve& curve, double t) {
    p.validate();
    const auto w = hw_terms(p.kappa, t);
    const double mean_r = p.r0 * std::exp(-p.kappa * t) + p.theta * p.kappa * w.xi1;
    const double mean_y = p.r0 * w.xi1 + p.theta * w.t_minus_xi1;
    HwMarginals m;
    m.A = mean_r + hw_shift_phi(p, curve, t);
    m.B = p.sigma * std::sqrt(w.xi2);
    m.omega = mean_y + hw_integrated_phi(p, curve, t);
    m.Omega = p.sigma / p.kappa * std::sqrt(w.d);
    return m;
}

struct HwCorrelations {
    double lambda_Lambda;
    double V_lambda;
    double V_Lambda;
};

inline HwCorrelations hw_correlations(const HwParams& p, const ExposureSpec& spec, double t,
                                      CorrMode mode = CorrMode::paper) {
    p.validate();
    const double T = spec.maturity;
    const bool irs = spec.kind == ExposureKind::irs;
    if (!(t > 0.0) || t > T || (irs && t == T)) {
        throw DomainError(wwr::detail::concat("hw_correlations: t=", t, " outside (0, ", T, ")"));
    }
    const double k = p.kappa;
    const auto w = hw_terms(k, t);
    const double sd = std::sqrt(w.d);
    HwCorrelations c{};
    // xi1 - xi2 = kappa xi1^2 / 2
    c.lambda_Lambda = 0.5 * k * w.xi1 * w.xi1 / (std::sqrt(w.xi2) * sd);
    if (!irs) {
        c.V_lambda = mode == CorrMode::paper ? p.rho : p.rho * w.xi1 / (std::sqrt(w.xi2) * std::sqrt(t));
        c.V_Lambda = p.rho * w.t_minus_xi1 / (std::sqrt(t) * sd);
    } else {
        const double tau = T - t;
        const double bnorm = std::sqrt(t * tau / T);
        const double log_ratio = std::log(T / tau);
        const double excess = math::expint_ratio_minus_log(-T, t - T, k);
        const double growth = std::exp(k * tau);
        if (mode == CorrMode::paper) {
            c.V_lambda = p.rho * std::sqrt(tau * T) * log_ratio / t;
        } else {
            // -e^{k tau} int_{-T}^{t-T} e^{ks}/s ds, the log written out separately
            const double kernel = growth * (log_ratio - excess);
            c.V_lambda = p.rho * tau * kernel / (std::sqrt(w.xi2) * bnorm);
        }
        // ln(T/tau) + e^{k tau} int_{-T}^{t-T} e^{ks}/s ds
        const double bracket = growth * excess - std::expm1(k * tau) * log_ratio;
        c.V_Lambda = p.rho * tau * bracket / (sd * bnorm);
    }
    return c;
}

inline math::Matrix3 hw_cholesky(const HwCorrelations& c) {
    return math::cholesky3({c.lambda_Lambda, c.V_lambda, c.V_Lambda});
}

/// Coefficients of lambda ~ A + B X, S ~ k exp(-(alpha X + beta Y + gamma Z)),
/// V ~ a + alpha_t X + beta_t Y + gamma_t Z with X, Y, Z independent N(0,1).
struct TripleLaw {
    double A = 0.0;
    double B = 0.0;
    double k = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double a = 0.0;
    double alpha_t = 0.0;
    double beta_t = 0.0;
    double gamma_t = 0.0;
};

/// v = (mu, sigma, delta, a, b, c, d) indexes the double integrals below against
/// phi(a + b x) phi(c + d y).
struct IVec {
    double mu;
    double sigma;
    double delta;
    double a;
    double b;
    double c;
    double d;
};

namespace detail {

struct IParts {
    double s;
    double rb;  // sqrt(b^2 + mu^2)
    double A;
    double B;
    double C;
    double beta;
    double A_hat;
    double phi_v;
};

inline double phi_scaled(double x, double k) { return math::norm_pdf(x / k) / std::fabs(k); }

inline IParts parts(const IVec& v) {
    if (v.b == 0.0) {
        throw DegenerateInputError("appendix integral: b = 0", "b");
    }
    if (v.d == 0.0) {
        throw DegenerateInputError("appendix integral: d = 0", "d");
    }
    IParts r{};
    r.s = (v.b * v.d > 0.0) ? 1.0 : -1.0;
    r.rb = std::sqrt(v.b * v.b + v.mu * v.mu);
    r.A = (v.delta * v.b - v.mu * v.a) / r.rb;
    r.B = v.sigma * v.b / r.rb;
    r.C = r.A * v.d - r.B * v.c;
    r.beta = std::sqrt(v.d * v.d + r.B * r.B);
    r.A_hat = r.s * (v.delta * v.b * v.d - v.mu * v.a * v.d - v.sigma * v.c * v.b) / (v.d * r.rb);
    r.phi_v = phi_scaled(r.C, r.beta);
    return r;
}

}  // namespace detail

/// int phi(mu x + sigma y + delta) phi(a + b x) phi(c + d y)
inline double integral_A(const IVec& v) {
    const auto p = detail::parts(v);
    return p.phi_v / p.rb;
}

/// int Phi(mu x + sigma y + delta) phi(a + b x) phi(c + d y)
inline double integral_B(const IVec& v) {
    const auto p = detail::parts(v);
    return p.s / (v.b * v.d) * math::norm_cdf(p.A_hat * v.d / p.beta);
}

/// int x Phi(mu x + sigma y + delta) phi(a + b x) phi(c + d y)
inline double integral_C(const IVec& v) {
    const auto p = detail::parts(v);
    return v.mu / (v.b * v.b) * detail::phi_scaled(p.A_hat * v.d, p.beta) / p.rb - v.a / v.b * integral_B(v);
}

/// int x phi(mu x + sigma y + delta) phi(a + b x) phi(c + d y)
inline double integral_D(const IVec& v) {
    const auto p = detail::parts(v);
    const double ratio = (p.A * p.B + v.c * v.d) / (p.beta * p.beta);
    return -p.phi_v / (v.b * p.rb) * (v.mu * p.A / p.rb + v.a - v.mu * p.B / p.rb * ratio);
}

namespace detail {

inline double integral_E1(const IVec& v, const IParts& p) {
    return p.s / v.d * math::norm_cdf(p.s * p.C / p.beta);
}

inline double integral_E2(const IVec& v, const IParts& p) {
    return -p.phi_v * (p.A * p.B + v.c * v.d) / (p.beta * p.beta);
}

}  // namespace detail

/// int x^2 Phi(mu x + sigma y + delta) phi(a + x) phi(c + y)
inline double integral_E(const IVec& v) {
    const auto p = detail::parts(v);
    const double r2 = p.rb * p.rb;
    const double mu2 = v.mu * v.mu;
    return ((1.0 + v.a * v.a) * detail::integral_E1(v, p) -
            (2.0 * v.a * v.mu / p.rb + p.A * mu2 / r2) * p.phi_v - p.B * mu2 / r2 * detail::integral_E2(v, p)) /
           (v.b * v.b * v.b);
}

/// int x y Phi(mu x + sigma y + delta) phi(a + x) phi(c + y)
inline double integral_F(const IVec& v) {
    const auto p = detail::parts(v);
    const double f1 = detail::integral_E2(v, p);
    const double f2 = p.B / (v.d * v.d) * p.phi_v - v.c / v.d * detail::integral_E1(v, p);
    return v.mu / (v.b * v.b * p.rb) * f1 - v.a / (v.b * v.b) * f2;
}

/// I1 = int J phi(x + alpha) phi(y + beta), I2 = int x J phi(x + alpha) phi(y + beta)
inline std::pair<double, double> appendix_I12(const TripleLaw& L) {
    if (L.gamma_t == 0.0) {
        // J(x, y) collapses to (a + alpha_t x + beta_t y)^+
        const double m = L.a - L.alpha_t * L.alpha - L.beta_t * L.beta;
        const double s = std::hypot(L.alpha_t, L.beta_t);
        if (s == 0.0) {
            const double mp = std::max(m, 0.0);
            return {mp, -L.alpha * mp};
        }
        const double i1 = m * math::norm_cdf(m / s) + s * math::norm_pdf(m / s);
        return {i1, -L.alpha * i1 + L.alpha_t * math::norm_cdf(m / s)};
    }
    const double g = std::fabs(L.gamma_t);
    const double shift = L.a - L.gamma * L.gamma_t;
    const IVec v1{L.alpha_t / g, L.beta_t / g, shift / g, L.alpha, 1.0, L.beta, 1.0};
    const IVec v2{L.beta_t / g, L.alpha_t / g, shift / g, L.beta, 1.0, L.alpha, 1.0};
    const double ib1 = integral_B(v1);
    const double ic1 = integral_C(v1);
    const double i1 = shift * ib1 + L.alpha_t * ic1 + L.beta_t * integral_C(v2) + g * integral_A(v1);
    const double i2 = shift * ic1 + L.alpha_t * integral_E(v1) + L.beta_t * integral_F(v1) + g * integral_D(v1);
    return {i1, i2};
}

/// E[lambda S V^+] for the triple law.
inline double hw_appendix_E(const TripleLaw& L) {
    const auto [i1, i2] = appendix_I12(L);
    const double tilt = std::exp(0.5 * (L.alpha * L.alpha + L.beta * L.beta + L.gamma * L.gamma));
    return L.k * tilt * (L.A * i1 + L.B * i2);
}

inline TripleLaw hw_triple_law(const HwParams& p, const ExposureSpec& spec, const CreditCurve& curve, double t,
                               CorrMode mode) {
    const auto m = marginal(spec, t);
    const auto mg = hw_marginals(p, curve, t);
    const auto r = hw_cholesky(hw_correlations(p, spec, t, mode));
    TripleLaw L;
    L.A = mg.A;
    L.B = mg.B;
    L.k = std::exp(-mg.omega);
    L.alpha = mg.Omega * r[1][0];
    L.beta = mg.Omega * r[1][1];
    L.gamma = 0.0;
    L.a = m.a;
    L.alpha_t = m.b * r[2][0];
    L.beta_t = m.b * r[2][1];
    L.gamma_t = m.b * r[2][2];
    return L;
}

/// f(t) = E[lambda_t S_t V_t^+] / (h(t) G(t)); can be negative for rho < 0.
inline double hw_wwr_epe(const HwParams& p, const ExposureSpec& spec, const CreditCurve& curve, double t,
                         CorrMode mode = CorrMode::paper) {
    p.validate();
    const auto m = marginal(spec, t);
    if (m.b == 0.0) {
        return std::max(m.a, 0.0);
    }
    const auto L = hw_triple_law(p, spec, curve, t, mode);
    return hw_appendix_E(L) / (curve.hazard(t) * curve.survival(t));
}

inline EpeProfile hw_profile(const HwParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                             const std::vector<double>& grid, CorrMode mode = CorrMode::paper) {
    EpeProfile out;
    out.model = "hw";
    out.rho = p.rho;
    out.times = grid;
    for (double t : grid) {
        out.values.push_back(hw_wwr_epe(p, spec, curve, t, mode));
    }
    return out;
}

inline CvaResult hw_cva(const HwParams& p, const ExposureSpec& spec, const CreditCurve& curve,
                        const math::QuadratureRule& rule = default_cva_rule(), CorrMode mode = CorrMode::paper) {
    p.validate();
    return integrate_cva([&](double t) { return hw_wwr_epe(p, spec, curve, t, mode); }, spec, curve, rule, "hw",
                         p.rho);
}

}  // namespace wwr::hw
