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

// Parallel, schedule-invariant execution of many trajectories.

#ifndef NCQF_ENSEMBLE_HPP
#define NCQF_ENSEMBLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ncqf/simulate.hpp"

namespace ncqf {

struct Stats {
    long long count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_mean = 0.0;
    double p16 = 0.0;
    double p50 = 0.0;
    double p84 = 0.0;
};

/// Percentile with linear interpolation between order statistics; q in [0, 1].
double percentile(std::vector<double> values, double q);
/// Ignores NaN entries.
Stats describe(const std::vector<double> &values);

struct TrajectoryOutcome {
    long long index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    long long failed_step = -1;
    /// One entry per scenario observable; NaN on failure.
    std::vector<double> terminal;
    std::optional<bool> success;
    std::optional<double> trigger_time;
    long long capped_steps = 0;
};

struct EnsembleOptions {
    /// 0 picks the hardware concurrency.
    int workers = 1;
    /// Abort when more than this fraction of trajectories fail.
    double failure_cap = 0.05;
    bool keep_records = false;
    /// Collect per-row percentile bands of every observable.
    bool aggregate = false;
};

struct EnsembleSummary {
    std::string scenario;
    std::string config_digest;
    std::uint64_t master_seed = 0;
    long long n_traj = 0;
    long long completed = 0;
    long long failed = 0;
    /// Postselection successes; zero when the scenario has no rule.
    long long successes = 0;
    bool has_postselect = false;
    std::vector<std::string> observables;
    std::vector<TrajectoryOutcome> outcomes;
    /// Terminal statistics per observable over completed trajectories.
    std::map<std::string, Stats> terminal;
    /// The same over postselected trajectories.
    std::map<std::string, Stats> selected_terminal;

    /// Time grid and per-row bands; filled when EnsembleOptions::aggregate.
    std::vector<double> times;
    std::map<std::string, std::vector<Stats>> bands;

    std::vector<TrajectoryRecord> records;

    double success_fraction() const { return n_traj > 0 ? static_cast<double>(successes) / n_traj : 0.0; }
    /// Terminal values of the named observable over completed (optionally
    /// only postselected) trajectories, in index order.
    std::vector<double> terminal_values(const std::string &name, bool selected_only = false) const;

    /// Everything except records and bands; wall-clock free.
    nlohmann::json to_json() const;
    /// SHA-256 of to_json().dump().
    std::string digest() const;
};

std::string sha256_hex(const std::string &bytes);
std::string config_digest(const ScenarioConfig &config);

EnsembleSummary run_ensemble(const Scenario &scenario, long long n_traj, std::uint64_t master_seed,
                             const EnsembleOptions &options = {});
EnsembleSummary run_ensemble(const ScenarioConfig &config, long long n_traj, std::uint64_t master_seed,
                             const EnsembleOptions &options = {});

}  // namespace ncqf

#endif
