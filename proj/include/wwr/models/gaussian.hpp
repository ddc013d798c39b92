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

#include "wwr/errors.hpp"

namespace wwr::gm {

/// dS = -h(t) G(t) dt + sigma dW. Calibrated by construction and zeta = 1,
/// so it is only ever simulated.
struct GaussianMartingaleParams {
    double sigma = 0.01;
    double rho = 0.0;

    void validate() const {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
            throw DomainError(wwr::detail::concat("gaussian martingale: sigma must be >= 0, got ", sigma));
        }
        if (!(std::fabs(rho) <= 1.0)) {
            throw DomainError(wwr::detail::concat("gaussian martingale: rho must lie in [-1, 1], got ", rho));
        }
    }
};

}  // namespace wwr::gm
