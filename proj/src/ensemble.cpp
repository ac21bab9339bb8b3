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

#include "ncqf/ensemble.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ncqf/errors.hpp"
#include "ncqf/rng.hpp"

namespace ncqf {

using nlohmann::json;

double percentile(std::vector<double> values, double q) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(pos));
    size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

Stats describe(const std::vector<double> &values) {
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (!std::isnan(x)) {
            v.push_back(x);
        }
    }
    Stats s;
    s.count = static_cast<long long>(v.size());
    if (v.empty()) {
        s.mean = s.stddev = s.stderr_mean = s.p16 = s.p50 = s.p84 = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(v.size()));
    std::sort(v.begin(), v.end());
    s.p16 = percentile(v, 0.16);
    s.p50 = percentile(v, 0.50);
    s.p84 = percentile(v, 0.84);
    return s;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; k++) {
        out.push_back(hex[md[k] >> 4]);
        out.push_back(hex[md[k] & 15]);
    }
    return out;
}

std::string config_digest(const ScenarioConfig &config) {
    return sha256_hex(to_json(config).dump());
}

std::vector<double> EnsembleSummary::terminal_values(const std::string &name, bool selected_only) const {
    auto it = std::find(observables.begin(), observables.end(), name);
    if (it == observables.end()) {
        throw ValidationError("observable", "no observable named '" + name + "'");
    }
    const size_t j = static_cast<size_t>(it - observables.begin());
    std::vector<double> out;
    for (const auto &o : outcomes) {
        if (!o.ok || (selected_only && !o.success.value_or(false))) {
            continue;
        }
        out.push_back(o.terminal[j]);
    }
    return out;
}

namespace {

json stats_json(const Stats &s) {
    return {{"count", s.count}, {"mean", s.mean},   {"std", s.stddev}, {"stderr", s.stderr_mean},
            {"p16", s.p16},     {"p50", s.p50},     {"p84", s.p84}};
}

}  // namespace

json EnsembleSummary::to_json() const {
    json traj = json::array();
    for (const auto &o : outcomes) {
        json t = {{"index", o.index}, {"seed", o.seed}, {"status", o.ok ? "ok" : "failed"}};
        if (!o.ok) {
            t["error"] = o.error;
            t["failed_step"] = o.failed_step;
        }
        json term = json::object();
        for (size_t j = 0; j < observables.size(); j++) {
            term[observables[j]] = o.terminal[j];
        }
        t["terminal"] = term;
        if (o.success) {
            t["success"] = *o.success;
        }
        if (o.trigger_time) {
            t["trigger_time"] = *o.trigger_time;
        }
        t["capped_steps"] = o.capped_steps;
        traj.push_back(t);
    }
    json term = json::object();
    for (const auto &[k, v] : terminal) {
        term[k] = stats_json(v);
    }
    json j = {
        {"schema", "ncqf.ensemble/1"},
        {"scenario", scenario},
        {"config_digest", config_digest},
        {"master_seed", master_seed},
        {"n_traj", n_traj},
        {"completed", completed},
        {"failed", failed},
        {"observables", observables},
        {"terminal", term},
        {"trajectories", traj},
    };
    if (has_postselect) {
        json sel = json::object();
        for (const auto &[k, v] : selected_terminal) {
            sel[k] = stats_json(v);
        }
        j["successes"] = successes;
        j["success_fraction"] = success_fraction();
        j["selected_terminal"] = sel;
    }
    return j;
}

std::string EnsembleSummary::digest() const {
    return sha256_hex(to_json().dump());
}

EnsembleSummary run_ensemble(const Scenario &scenario, long long n_traj, std::uint64_t master_seed,
                             const EnsembleOptions &options) {
    if (n_traj < 1) {
        throw ValidationError("trajectories", "must be at least 1");
    }
    if (!(options.failure_cap >= 0.0 && options.failure_cap <= 1.0)) {
        throw ValidationError("failure_cap", "must lie in [0, 1]");
    }
    const size_t n = static_cast<size_t>(n_traj);
    const size_t n_obs = scenario.observables.size();
    std::vector<TrajectoryOutcome> outcomes(n);
    std::vector<TrajectoryRecord> records(options.keep_records || options.aggregate ? n : 0);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            TrajectoryOutcome &o = outcomes[i];
            o.index = static_cast<long long>(i);
            o.seed = split_seed(master_seed, i);
            o.terminal.assign(n_obs, std::numeric_limits<double>::quiet_NaN());
            try {
                TrajectoryRecord rec = simulate_trajectory(scenario, o.seed);
                for (size_t j = 0; j < n_obs; j++) {
                    o.terminal[j] = rec.observables[j].back();
                }
                if (scenario.postselect_observable) {
                    o.success = scenario.postselect_observable->eval(rec.final_state) > scenario.config.postselect->threshold;
                }
                o.trigger_time = rec.trigger_time;
                o.capped_steps = rec.capped_steps;
                o.ok = true;
                if (!records.empty()) {
                    records[i] = std::move(rec);
                }
            } catch (const IntegrationError &e) {
                o.error = e.what();
                o.failed_step = e.step_index;
            } catch (const std::exception &e) {
                o.error = e.what();
            }
        }
    };

    int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    EnsembleSummary s;
    s.scenario = scenario.config.name;
    s.config_digest = config_digest(scenario.config);
    s.master_seed = master_seed;
    s.n_traj = n_traj;
    s.has_postselect = scenario.postselect_observable.has_value();
    for (const auto &o : scenario.observables) {
        s.observables.push_back(o.name);
    }
    for (const auto &o : outcomes) {
        if (o.ok) {
            s.completed++;
            s.successes += o.success.value_or(false) ? 1 : 0;
        } else {
            s.failed++;
        }
    }
    if (static_cast<double>(s.failed) > options.failure_cap * static_cast<double>(n_traj)) {
        const auto &first = *std::find_if(outcomes.begin(), outcomes.end(), [](const auto &o) { return !o.ok; });
        throw IntegrationError(first.failed_step, "trajectory " + std::to_string(first.index) + " failed (" +
                                                      std::to_string(s.failed) + " of " + std::to_string(n_traj) +
                                                      " exceed the failure cap): " + first.error);
    }
    s.outcomes = std::move(outcomes);
    for (const auto &name : s.observables) {
        s.terminal[name] = describe(s.terminal_values(name));
        if (s.has_postselect) {
            s.selected_terminal[name] = describe(s.terminal_values(name, true));
        }
    }

    if (options.aggregate) {
        size_t rows = 0;
        for (size_t i = 0; i < n; i++) {
            if (s.outcomes[i].ok) {
                rows = records[i].rows();
                s.times = records[i].times;
                break;
            }
        }
        for (size_t j = 0; j < n_obs; j++) {
            std::vector<Stats> band(rows);
            std::vector<double> column;
            for (size_t r = 0; r < rows; r++) {
                column.clear();
                for (size_t i = 0; i < n; i++) {
                    if (s.outcomes[i].ok) {
                        column.push_back(records[i].observables[j][r]);
                    }
                }
                band[r] = describe(column);
            }
            s.bands[s.observables[j]] = std::move(band);
        }
    }
    if (options.keep_records) {
        s.records = std::move(records);
    }
    return s;
}

EnsembleSummary run_ensemble(const ScenarioConfig &config, long long n_traj, std::uint64_t master_seed,
                             const EnsembleOptions &options) {
    return run_ensemble(materialize(config), n_traj, master_seed, options);
}

}  // namespace ncqf
