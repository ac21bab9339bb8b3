// Copyright 2026 The NCQF Authors
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

#ifndef NCQF_RNG_HPP
#define NCQF_RNG_HPP

#include <cstdint>

namespace ncqf {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trajectory `index` in an ensemble with the given master seed.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index);

/// Standard normal variate addressed by (seed, step, channel). Counter based,
/// so the value does not depend on evaluation order or thread layout.
double standard_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t channel);

}  // namespace ncqf

#endif
