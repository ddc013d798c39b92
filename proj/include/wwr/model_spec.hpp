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

#include <string_view>
#include <type_traits>
#include <variant>

#include "wwr/models/cm.hpp"
#include "wwr/models/gaussian.hpp"
#include "wwr/models/gc.hpp"
#include "wwr/models/hw.hpp"
#include "wwr/models/ssrd.hpp"

namespace wwr {

using ModelSpec =
    std::variant<gc::GcParams, hw::HwParams, cm::CmParams, ssrd::SsrdParams, gm::GaussianMartingaleParams>;

/// Models with a survival process that can be simulated path by path.
using DynamicModel = std::variant<hw::HwParams, cm::CmParams, ssrd::SsrdParams, gm::GaussianMartingaleParams>;

template <typename T>
constexpr std::string_view model_name() {
    if constexpr (std::is_same_v<T, gc::GcParams>) {
        return "gc";
    } else if constexpr (std::is_same_v<T, hw::HwParams>) {
        return "hw";
    } else if constexpr (std::is_same_v<T, cm::CmParams>) {
        return "cm";
    } else if constexpr (std::is_same_v<T, ssrd::SsrdParams>) {
        return "ssrd";
    } else {
        return "gaussian";
    }
}

inline std::string_view model_name(const ModelSpec& m) {
    return std::visit([](const auto& p) { return model_name<std::decay_t<decltype(p)>>(); }, m);
}

inline std::string_view model_name(const DynamicModel& m) {
    return std::visit([](const auto& p) { return model_name<std::decay_t<decltype(p)>>(); }, m);
}

inline double model_rho(const ModelSpec& m) {
    return std::visit([](const auto& p) { return p.rho; }, m);
}

inline void set_model_rho(ModelSpec& m, double rho) {
    std::visit([rho](auto& p) { p.rho = rho; }, m);
}

}  // namespace wwr
