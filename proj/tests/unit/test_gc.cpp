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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "wwr/models/gc.hpp"

using Catch::Approx;
using namespace wwr;

namespace {
const auto fwd = ExposureSpec::forward(0.022, 5.0);
const auto irs = ExposureSpec::irs(0.005, 0.022, 5.0);
const auto c1 = CreditCurve::flat(0.01);
}  // namespace

TEST_CASE("gc conditional law", "[gc]") {
    const auto c = gc::gc_conditional_marginal({0.8}, fwd, c1, 2.5);
    const double q = math::norm_inv_cdf(c1.survival(2.5));
    CHECK(c.a_tilde == Approx(0.8 * q * 0.0347850542618522).epsilon(1e-13));
    CHECK(c.a_tilde == Approx(0.0546935).margin(5e-6));  // printed value rounds q to 1.9654
    CHECK(c.b_tilde == Approx(0.0208710325571113).epsilon(1e-13));
    const auto z = gc::gc_conditional_marginal({0.0}, irs, c1, 2.5);
    CHECK(z.a_tilde == marginal(irs, 2.5).a);
    CHECK(z.b_tilde == marginal(irs, 2.5).b);
    CHECK_THROWS_AS(gc::gc_conditional_marginal({1.5}, fwd, c1, 2.5), DomainError);
}

TEST_CASE("gc epe limits", "[gc]") {
    CHECK(gc::gc_wwr_epe({0.0}, irs, c1, 2.5) == Approx(unconditional_epe(irs, 2.5)).epsilon(1e-15));
    CHECK(gc::gc_wwr_epe({1.0}, fwd, c1, 2.5) == Approx(0.0347850542618522 * math::norm_inv_cdf(c1.survival(2.5))).epsilon(1e-13));
    CHECK(gc::gc_wwr_epe({1.0}, fwd, c1, 2.5) == Approx(0.0683665).margin(5e-6));
    CHECK(gc::gc_wwr_epe({-1.0}, fwd, c1, 2.5) == 0.0);
    CHECK(gc::gc_quantile(fwd, c1, 2.5, 1.0) == Approx(-gc::gc_quantile(fwd, c1, 2.5, -1.0)));
    // the closed form is continuous into the quantile limits
    for (double t : {0.5, 2.5, 4.5}) {
        CHECK(gc::gc_wwr_epe({1.0 - 1e-10}, irs, c1, t) == Approx(gc::gc_wwr_epe({1.0}, irs, c1, t)).epsilon(1e-4));
        CHECK(gc::gc_wwr_epe({-1.0 + 1e-10}, irs, c1, t) ==
              Approx(gc::gc_wwr_epe({-1.0}, irs, c1, t)).margin(1e-6));
    }
}

TEST_CASE("gc epe is increasing in rho while G(t) > 1/2", "[gc]") {
    for (double t : {0.5, 2.5, 5.0}) {
        double prev = -1.0;
        for (double rho = -1.0; rho <= 1.0 + 1e-12; rho += 0.1) {
            const double f = gc::gc_wwr_epe({std::clamp(rho, -1.0, 1.0)}, fwd, c1, t);
            CHECK(f >= prev);
            prev = f;
        }
    }
}

TEST_CASE("gc cva", "[gc]") {
    for (double h : {0.01, 0.05, 0.3}) {
        const auto curve = CreditCurve::flat(h);
        for (const auto& spec : {fwd, irs}) {
            const auto perp = independent_cva(spec, curve).cva;
            CHECK(gc::gc_cva({0.0}, spec, curve).cva == Approx(perp).epsilon(1e-14));
            const auto r = gc::gc_cva({0.6}, spec, curve);
            double sum = 0.0;
            for (const auto& s : r.samples) {
                sum += s.f * s.weight;
            }
            CHECK(r.cva == Approx(sum).epsilon(1e-13));
            CHECK(r.model == "gc");
            CHECK(r.rho == 0.6);
        }
    }
}
