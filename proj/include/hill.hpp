// Copyright 2026 The hillmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HILL_HPP_
#define HILL_HPP_

// Umbrella header.

#include "hill/config.hpp"
#include "hill/distribution.hpp"
#include "hill/error.hpp"
#include "hill/ingest.hpp"
#include "hill/io.hpp"
#include "hill/myopic.hpp"
#include "hill/nonmyopic.hpp"
#include "hill/quadrature.hpp"
#include "hill/rng.hpp"
#include "hill/schedule.hpp"
#include "hill/sim.hpp"
#include "hill/special.hpp"
#include "hill/thresholds.hpp"

#endif  // HILL_HPP_
