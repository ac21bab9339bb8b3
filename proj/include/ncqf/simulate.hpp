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

// Single-trajectory driver.

#ifndef NCQF_SIMULATE_HPP
#define NCQF_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncqf/nhh.hpp"
#include "ncqf/scenario.hpp"
#include "ncqf/trajectory.hpp"

namespace ncqf {

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<std::string> observable_names;
    /// observables[j][row]
    std::vector<std::vector<double>> observables;
    std::vector<std::string> channel_labels;
    /// Sum of r_c dt since the previous row; zero on the first row.
    std::vector<std::vector<double>> readouts;
    /// Sum of dW_c since the previous row; zero on the first row.
    std::vector<std::vector<double>> noise;
    std::vector<Operator> snapshots;
    std::vector<SpectrumSample> spectrum;
    std::optional<double> trigger_time;
    QuantumState final_state;
    long long steps = 0;
    long long capped_steps = 0;
    long long degenerate_steps = 0;

    size_t rows() const { return times.size(); }
    /// Series of the named observable; throws ValidationError if absent.
    const std::vector<double> &series(const std::string &name) const;
    double terminal(const std::string &name) const { return series(name).back(); }
};

/// Called after every step with the step index (1-based), the time, the new
/// state and the step details.
using StepObserver = std::function<void(long long, double, const QuantumState &, const StepResult &)>;

struct SimulationOptions {
    /// Store rho on every snapshot_stride-th row; 0 disables snapshots.
    int snapshot_stride = 0;
    StepObserver observer;
};

/// Deterministic given (scenario, seed): dW_c at step k is
/// sqrt(dt) * standard_normal(seed, k, c).
TrajectoryRecord simulate_trajectory(const Scenario &scenario, std::uint64_t seed,
                                     const SimulationOptions &options = {});
TrajectoryRecord simulate_trajectory(const ScenarioConfig &config, std::uint64_t seed,
                                     const SimulationOptions &options = {});

}  // namespace ncqf

#endif
