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

// Command-line front end.

#ifndef NCQF_CLI_HPP
#define NCQF_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncqf/ensemble.hpp"

namespace ncqf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIntegration = 3;

inline constexpr const char *kCsvSchema = "ncqf.csv/1";

enum class CsvMode { automatic, per_trajectory, aggregate };

struct RunRequest {
    std::string config_path;
    std::string preset;
    std::string manifest_path;
    std::optional<long long> trajectories;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<int> workers;
    std::optional<int> observable_stride;
    std::string out_dir = "ncqf_out";
    CsvMode csv = CsvMode::automatic;
};

/// 17 significant digits.
std::string format_double(double x);

void write_trajectory_csv(const TrajectoryRecord &record, const std::string &path);
void write_aggregate_csv(const EnsembleSummary &summary, const std::string &path);
void write_spectrum_csv(const std::vector<TrajectoryRecord> &records, const std::string &path);

int cmd_run(const RunRequest &request, std::ostream &out, std::ostream &err);
int cmd_analytic(const std::string &quantity, const std::vector<std::string> &eps, std::ostream &out,
                 std::ostream &err);
int cmd_list(std::ostream &out);

int main(int argc, char **argv);

}  // namespace ncqf::cli

#endif
