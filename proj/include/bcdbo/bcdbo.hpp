// SPDX-License-Identifier: Apache-2.0
//
// bcdbo: block-coordinate Bayesian optimization of base-station layouts
// Copyright (C) 2026 The bcdbo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BCDBO_BCDBO_HPP
#define BCDBO_BCDBO_HPP

#include "bcdbo/acquisition.hpp"
#include "bcdbo/config.hpp"
#include "bcdbo/domain.hpp"
#include "bcdbo/error.hpp"
#include "bcdbo/experiment.hpp"
#include "bcdbo/gp.hpp"
#include "bcdbo/optimizer.hpp"
#include "bcdbo/radio.hpp"
#include "bcdbo/rng.hpp"
#include "bcdbo/scene.hpp"

#endif
