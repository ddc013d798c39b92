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

#include "wwr/csv.hpp"
#include "wwr/cva.hpp"
#include "wwr/errors.hpp"
#include "wwr/market.hpp"
#include "wwr/mathkit.hpp"
#include "wwr/mc/engine.hpp"
#include "wwr/mc/epe.hpp"
#include "wwr/mc/paths.hpp"
#include "wwr/mc/philox.hpp"
#include "wwr/mc/ssrd.hpp"
#include "wwr/mc/zeta_test.hpp"
#include "wwr/model_spec.hpp"
