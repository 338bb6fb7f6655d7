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

#pragma once

// CODATA 2018 exact/recommended values, SI units.
namespace qbind::constants {

inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C

inline constexpr double joule_per_ev = elementary_charge;
inline constexpr double meter_per_nm = 1e-9;

constexpr double ev_to_joule(double ev) { return ev * joule_per_ev; }
constexpr double joule_to_ev(double j) { return j / joule_per_ev; }

}  // namespace qbind::constants
