// Copyright 2026 The qbind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qbind.hpp: umbrella header for the library (everything except the CLI).

#pragma once

#include "qbind/binding.hpp"
#include "qbind/constants.hpp"
#include "qbind/errors.hpp"
#include "qbind/io.hpp"
#include "qbind/jaynes_cummings.hpp"
#include "qbind/matrix.hpp"
#include "qbind/operators.hpp"
#include "qbind/propagation.hpp"
#include "qbind/pulse_synthesis.hpp"
#include "qbind/spectral.hpp"
#include "qbind/tunneling_well.hpp"
