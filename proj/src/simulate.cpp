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

#include "ncqf/simulate.hpp"

#include <cmath>

#include "ncqf/errors.hpp"
#include "ncqf/rng.hpp"

namespace ncqf {

const std::vector<double> &TrajectoryRecord::series(const std::string &name) const {
    for (size_t j = 0; j < observable_names.size(); j++) {
        if (observable_names[j] == name) {
            return observables[j];
        }
    }
    throw ValidationError("observable", "no series named '" + name + "'");
}

namespace {

class Recorder {
   public:
    Recorder(const Scenario &scenario, TrajectoryRecord &rec, const SimulationOptions &options)
        : scenario_(scenario), rec_(rec), options_(options), tracker_() {
        const size_t nc = scenario.channels.size();
        for (const auto &o : scenario.observables) {
            rec.observable_names.push_back(o.name);
        }
        rec.observables.resize(scenario.observables.size());
        for (const auto &ch : scenario.channels) {
            rec.channel_labels.push_back(ch.label);
        }
        rec.readouts.resize(nc);
        rec.noise.resize(nc);
        pending_r_.assign(nc, 0.0);
        pending_dw_.assign(nc, 0.0);
    }

    void accumulate(size_t c, double r_dt, double dw) {
        pending_r_[c] += r_dt;
        pending_dw_[c] += dw;
    }

    void row(double t, const QuantumState &state, const Operator &omega) {
        const size_t row_index = rec_.times.size();
        rec_.times.push_back(t);
        for (size_t j = 0; j < scenario_.observables.size(); j++) {
            rec_.observables[j].push_back(scenario_.observables[j].eval(state));
        }
        for (size_t c = 0; c < pending_r_.size(); c++) {
            rec_.readouts[c].push_back(pending_r_[c]);
            rec_.noise[c].push_back(pending_dw_[c]);
            pending_r_[c] = 0.0;
            pending_dw_[c] = 0.0;
        }
        if (options_.snapshot_stride > 0 && row_index % static_cast<size_t>(options_.snapshot_stride) == 0) {
            rec_.snapshots.push_back(state.rho());
        }
        if (scenario_.config.track_spectrum) {
            std::vector<Operator> omegas;
            for (size_t c = 0; c < scenario_.channels.size(); c++) {
                omegas.push_back(synthesize(scenario_.laws[c], state, scenario_.channels[c]));
            }
            tracker_.push(t, build_hnc(state, scenario_.channels, omegas, omega));
        }
    }

    void finish() { rec_.spectrum = tracker_.samples(); }

   private:
    const Scenario &scenario_;
    TrajectoryRecord &rec_;
    const SimulationOptions &options_;
    SpectrumTracker tracker_;
    std::vector<double> pending_r_;
    std::vector<double> pending_dw_;
};

}  // namespace

TrajectoryRecord simulate_trajectory(const Scenario &scenario, std::uint64_t seed, const SimulationOptions &options) {
    const auto &cfg = scenario.config;
    const long long steps = cfg.num_steps();
    const double dt = cfg.dt;
    const size_t nc = scenario.channels.size();
    const double sqrt_dt = std::sqrt(dt);

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.steps = steps;

    StepOptions step_options;
    step_options.integrator = cfg.integrator;
    Stepper stepper(scenario.channels, step_options);

    ControlInputs controls;
    controls.omega = scenario.omega;
    controls.feedback = scenario.laws;
    const int n = scenario.initial.dim();

    auto check_trigger = [&](double t, const QuantumState &state) {
        if (scenario.trigger_observable && !rec.trigger_time &&
            scenario.trigger_observable->eval(state) > cfg.trigger->threshold) {
            rec.trigger_time = t;
            Operator base = controls.omega.size() > 0 ? controls.omega : Operator::Zero(n, n);
            controls.omega = base + scenario.trigger_omega;
        }
    };

    Recorder recorder(scenario, rec, options);
    QuantumState state = scenario.initial;
    check_trigger(0.0, state);
    try {
        recorder.row(0.0, state, controls.omega);
    } catch (const PreconditionError &e) {
        throw IntegrationError(0, e.what());
    }

    std::vector<double> dw(nc);
    for (long long k = 0; k < steps; k++) {
        for (size_t c = 0; c < nc; c++) {
            dw[c] = sqrt_dt * standard_normal(seed, static_cast<std::uint64_t>(k), c);
        }
        StepResult res;
        try {
            res = stepper.step(state, controls, dt, dw, k);
        } catch (const PreconditionError &e) {
            throw IntegrationError(k, e.what());
        }
        for (size_t c = 0; c < nc; c++) {
            recorder.accumulate(c, res.readouts[c] * dt, dw[c]);
        }
        rec.capped_steps += res.capped ? 1 : 0;
        rec.degenerate_steps += res.degenerate ? 1 : 0;
        state = std::move(res.state);
        const long long done = k + 1;
        const double t = static_cast<double>(done) * dt;
        if (options.observer) {
            res.state = state;
            options.observer(done, t, state, res);
        }
        check_trigger(t, state);
        if (done % cfg.observable_stride == 0 || done == steps) {
            try {
                recorder.row(t, state, controls.omega);
            } catch (const PreconditionError &e) {
                throw IntegrationError(done, e.what());
            }
        }
    }
    recorder.finish();
    rec.final_state = std::move(state);
    return rec;
}

TrajectoryRecord simulate_trajectory(const ScenarioConfig &config, std::uint64_t seed,
                                     const SimulationOptions &options) {
    return simulate_trajectory(materialize(config), seed, options);
}

}  // namespace ncqf
