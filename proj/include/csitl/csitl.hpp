// SPDX-License-Identifier: Apache-2.0
//
// csitl - Monte Carlo link-level simulator for CSIT-limited multi-antenna systems
// Copyright (C) 2026 The csitl Authors
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

#ifndef CSITL_CSITL_HPP
#define CSITL_CSITL_HPP

#include "beamforming.hpp"
#include "channel.hpp"
#include "fbl.hpp"
#include "linalg.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "scenarios.hpp"
#include "units.hpp"
#include "wet.hpp"

#endif // CSITL_CSITL_HPP
