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

#include "ncqf/rng.hpp"

#include <cmath>
#include <numbers>

namespace ncqf {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double standard_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t channel) {
    std::uint64_t key = splitmix64(seed ^ splitmix64(step ^ splitmix64(channel ^ 0xD1B54A32D192ED03ULL)));
    std::uint64_t h1 = splitmix64(key);
    std::uint64_t h2 = splitmix64(key ^ 0x8CB92BA72F3D8DD7ULL);
    // u1 in (0, 1], u2 in [0, 1).
    double u1 = (static_cast<double>(h1 >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ncqf
