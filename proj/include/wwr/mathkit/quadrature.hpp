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
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "wwr/errors.hpp"

namespace wwr::math {

/// Either an n-node Gauss-Legendre rule or adaptive Simpson with an absolute
/// tolerance. Build through the factories; they enforce n >= 2 and tol > 0.
class QuadratureRule {
public:
    enum class Kind { gauss_legendre, adaptive_simpson };

    static QuadratureRule gauss_legendre(int nodes) {
        if (nodes < 2) {
            throw DomainError(wwr::detail::concat("Gauss-Legendre rule needs >= 2 nodes, got ", nodes));
        }
        return QuadratureRule(Kind::gauss_legendre, nodes, 0.0);
    }

    static QuadratureRule adaptive_simpson(double tolerance) {
        if (!(tolerance > 0.0)) {
            throw DomainError(wwr::detail::concat("adaptive Simpson tolerance must be > 0, got ", tolerance));
        }
        return QuadratureRule(Kind::adaptive_simpson, 0, tolerance);
    }

    Kind kind() const noexcept { return kind_; }
    int nodes() const noexcept { return nodes_; }
    double tolerance() const noexcept { return tolerance_; }

    std::string describe() const {
        return kind_ == Kind::gauss_legendre
                   ? wwr::detail::concat("gauss-legendre(", nodes_, ")")
                   : wwr::detail::concat("adaptive-simpson(", tolerance_, ")");
    }

private:
    QuadratureRule(Kind k, int n, double tol) : kind_(k), nodes_(n), tolerance_(tol) {}

    Kind kind_;
    int nodes_;
    double tolerance_;
};

struct GaussLegendreTable {
    std::vector<double> x;  // on [-1, 1]
    std::vector<double> w;
};

namespace detail {

inline GaussLegendreTable build_gauss_legendre(int n) {
    GaussLegendreTable t;
    t.x.resize(n);
    t.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged root
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        t.x[i] = -z;
        t.x[n - 1 - i] = z;
        t.w[i] = w;
        t.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        t.x[m - 1] = 0.0;
    }
    return t;
}

}  // namespace detail

/// Nodes and weights are built once per n and shared read-only afterwards.
inline const GaussLegendreTable& gauss_legendre_table(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussLegendreTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<const GaussLegendreTable>(detail::build_gauss_legendre(n));
    }
    return *slot;
}

/// One evaluation point of a rule: integral = sum(weight * value).
struct QuadratureSample {
    double x;
    double weight;
    double value;
};

struct QuadratureResult {
    double value = 0.0;
    std::vector<QuadratureSample> samples;
};

namespace detail {

template <typename F>
double checked_eval(F& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw IntegrationError(wwr::detail::concat("integrand is not finite at x=", x, " (value ", v, ")"), x);
    }
    return v;
}

struct SimpsonPanel {
    double a, b;
    double fa, fm, fb;
    double whole;
    double eps;
    int depth;
};

}  // namespace detail

/// Integrates f over [lo, hi] and keeps every evaluation with its weight.
/// Adaptive Simpson accepts panels by the Lyness criterion and applies the
/// Richardson correction, so each accepted panel contributes Boole weights.
template <typename F>
QuadratureResult integrate_with_samples(F&& f, double lo, double hi, const QuadratureRule& rule) {
    if (!(lo < hi)) {
        throw DomainError(wwr::detail::concat("integrate: need lo < hi, got [", lo, ", ", hi, "]"));
    }
    QuadratureResult out;
    if (rule.kind() == QuadratureRule::Kind::gauss_legendre) {
        const auto& t = gauss_legendre_table(rule.nodes());
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        out.samples.reserve(t.x.size());
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            const double x = mid + half * t.x[i];
            const double v = detail::checked_eval(f, x);
            out.samples.push_back({x, half * t.w[i], v});
            out.value += half * t.w[i] * v;
        }
        return out;
    }

    constexpr int kMaxDepth = 200;
    auto simpson = [](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };
    const double fa = detail::checked_eval(f, lo);
    const double fm = detail::checked_eval(f, 0.5 * (lo + hi));
    const double fb = detail::checked_eval(f, hi);
    std::vector<detail::SimpsonPanel> stack;
    stack.push_back({lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb), rule.tolerance(), 0});
    while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m);
        const double rm = 0.5 * (m + p.b);
        const double flm = detail::checked_eval(f, lm);
        const double frm = detail::checked_eval(f, rm);
        const double left = simpson(p.a, m, p.fa, flm, p.fm);
        const double right = simpson(m, p.b, p.fm, frm, p.fb);
        const double diff = left + right - p.whole;
        if (std::fabs(diff) <= 15.0 * p.eps || p.depth >= kMaxDepth) {
            if (std::fabs(diff) > 15.0 * p.eps) {
                throw IntegrationError(
                    wwr::detail::concat("adaptive Simpson: no convergence near x=", m), m);
            }
            const double h = (p.b - p.a) / 90.0;
            out.samples.push_back({p.a, 7.0 * h, p.fa});
            out.samples.push_back({lm, 32.0 * h, flm});
            out.samples.push_back({m, 12.0 * h, p.fm});
            out.samples.push_back({rm, 32.0 * h, frm});
            out.samples.push_back({p.b, 7.0 * h, p.fb});
            out.value += left + right + diff / 15.0;
            continue;
        }
        // right half pushed first so panels are accepted left to right
        stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.eps, p.depth + 1});
        stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.eps, p.depth + 1});
    }
    return out;
}

template <typename F>
double integrate(F&& f, double lo, double hi, const QuadratureRule& rule) {
    if (rule.kind() == QuadratureRule::Kind::gauss_legendre) {
        if (!(lo < hi)) {
            throw DomainError(wwr::detail::concat("integrate: need lo < hi, got [", lo, ", ", hi, "]"));
        }
        const auto& t = gauss_legendre_table(rule.nodes());
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double sum = 0.0;
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            sum += t.w[i] * detail::checked_eval(f, mid + half * t.x[i]);
        }
        return half * sum;
    }
    return integrate_with_samples(std::forward<F>(f), lo, hi, rule).value;
}

}  // namespace wwr::math
