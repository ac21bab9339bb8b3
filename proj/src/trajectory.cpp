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

#include "ncqf/trajectory.hpp"

#include <cmath>

#include "ncqf/errors.hpp"

namespace ncqf {

namespace {

constexpr double kPositivityProbe = 1e-12;

bool needs_eigenbasis(const ControlInputs &controls) {
    for (const auto &law : controls.feedback) {
        if (std::holds_alternative<EigenbasisFeedback>(law)) {
            return true;
        }
    }
    return false;
}

}  // namespace

Operator drift_map(const QuantumState &state, std::span<const MeasurementChannel> channels,
                   std::span<const Operator> omegas, const Operator &omega_open_loop, double dt) {
    const Operator &rho = state.rho();
    const int n = state.dim();
    Operator h = omega_open_loop.size() > 0 ? omega_open_loop : Operator::Zero(n, n);
    Operator decay = Operator::Zero(n, n);
    Operator jumps = Operator::Zero(n, n);
    for (size_t c = 0; c < channels.size(); c++) {
        const Operator &L = channels[c].L;
        const Operator &w = omegas[c];
        const double se = std::sqrt(channels[c].eta);
        const double s = signal(state, channels[c]);
        Operator xi = se * L - kI * w;
        h += 0.5 * se * (w * L + L.adjoint() * w) - se * s * w;
        decay += xi.adjoint() * xi;
        jumps += xi * rho * xi.adjoint();
        if (channels[c].eta < 1.0) {
            decay += (1.0 - channels[c].eta) * (L.adjoint() * L);
            jumps += (1.0 - channels[c].eta) * (L * rho * L.adjoint());
        }
    }
    Operator k = Operator::Identity(n, n) - kI * dt * h - 0.5 * dt * decay;
    return k * rho * k.adjoint() + dt * jumps;
}

std::string integrator_name(Integrator integrator) {
    return integrator == Integrator::kraus ? "kraus" : "ito_euler";
}

Integrator parse_integrator(const std::string &name) {
    if (name == "kraus") {
        return Integrator::kraus;
    }
    if (name == "ito_euler") {
        return Integrator::ito_euler;
    }
    throw ValidationError("integrator", "expected 'kraus' or 'ito_euler', got '" + name + "'");
}

std::pair<Operator, Operator> kraus_pair(const MeasurementChannel &channel, double readout, double dt) {
    const Operator &L = channel.L;
    const int n = static_cast<int>(L.rows());
    Operator z = std::sqrt(channel.eta) * readout * L - 0.5 * (L.adjoint() * L);
    Operator m0 = Operator::Identity(n, n) + z * dt;
    Operator m1 = std::sqrt((1.0 - channel.eta) * dt) * L;
    return {m0, m1};
}

Stepper::Stepper(std::vector<MeasurementChannel> channels, StepOptions options)
    : channels_(std::move(channels)), options_(options) {
    if (channels_.empty()) {
        return;
    }
    const int n = static_cast<int>(channels_[0].L.rows());
    auto monomial_of = [n](const Operator &op) -> std::optional<Monomial> {
        Monomial m;
        m.col.assign(n, -1);
        m.val.assign(n, 0.0);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                if (op(i, j) != 0.0) {
                    if (m.col[i] >= 0) {
                        return std::nullopt;
                    }
                    m.col[i] = j;
                    m.val[i] = op(i, j);
                }
            }
            if (m.col[i] < 0) {
                m.col[i] = i;
            }
        }
        return m;
    };
    for (const auto &ch : channels_) {
        ch.validate(n);
        Prepared p;
        auto [x, y] = split_xy(ch.L);
        p.x = x;
        p.y = y;
        p.y_zero = y.cwiseAbs().maxCoeff() == 0.0;
        p.ldl = ch.L.adjoint() * ch.L;
        p.mono = monomial_of(ch.L);
        p.x_mono = monomial_of(x);
        if (p.mono) {
            p.ldl_diag = p.ldl.diagonal().real();
        }
        prepared_.push_back(std::move(p));
    }
}

Operator Stepper::apply_kraus(const Operator &rho, size_t c, double readout, double dt) const {
    const MeasurementChannel &ch = channels_[c];
    const Prepared &p = prepared_[c];
    const int n = static_cast<int>(rho.rows());
    const cplx beta = std::sqrt(ch.eta) * readout * dt;
    const double gamma = -0.5 * dt;
    const double lost = (1.0 - ch.eta) * dt;
    if (!p.mono) {
        auto [m0, m1] = kraus_pair(ch, readout, dt);
        Operator out = m0 * rho * m0.adjoint();
        if (lost > 0.0) {
            out += m1 * rho * m1.adjoint();
        }
        return out;
    }
    const Monomial &m = *p.mono;
    Operator pm(n, n);
    for (int i = 0; i < n; i++) {
        pm.row(i) = (1.0 + gamma * p.ldl_diag(i)) * rho.row(i) + (beta * m.val[i]) * rho.row(m.col[i]);
    }
    Operator out(n, n);
    for (int j = 0; j < n; j++) {
        out.col(j) = (1.0 + gamma * p.ldl_diag(j)) * pm.col(j) + std::conj(beta * m.val[j]) * pm.col(m.col[j]);
    }
    if (lost > 0.0) {
        Operator q(n, n);
        for (int i = 0; i < n; i++) {
            q.row(i) = m.val[i] * rho.row(m.col[i]);
        }
        for (int j = 0; j < n; j++) {
            out.col(j) += lost * std::conj(m.val[j]) * q.col(m.col[j]);
        }
    }
    return out;
}

Operator Stepper::feedback_generator(const QuantumState &state, const ControlInputs &controls, double dt,
                                     std::span<const double> dw, StepResult &result) const {
    const int n = state.dim();
    Operator comp = Operator::Zero(n, n);
    bool any = false;
    if (controls.omega.size() > 0) {
        comp += controls.omega * dt;
        any = true;
    }
    Operator frame;
    const EigDecomposition *eig = nullptr;
    for (size_t c = 0; c < channels_.size(); c++) {
        const FeedbackLaw &law = controls.feedback[c];
        if (!is_active(law)) {
            if (options_.keep_omegas) {
                result.omegas.push_back(Operator::Zero(n, n));
            }
            continue;
        }
        any = true;
        const auto *eb = std::get_if<EigenbasisFeedback>(&law);
        if (eb != nullptr && !eb->params.nullspace_block) {
            const Prepared &p = prepared_[c];
            if (eig == nullptr) {
                eig = &state.eig();
                frame = Operator::Zero(n, n);
            }
            const Operator &v = eig->vectors;
            Operator xv(n, n);
            if (p.x_mono) {
                for (int i = 0; i < n; i++) {
                    xv.row(i) = p.x_mono->val[i] * v.row(p.x_mono->col[i]);
                }
            } else {
                xv.noalias() = p.x * v;
            }
            Operator x_frame = v.adjoint() * xv;
            double sqrt_eta = std::sqrt(channels_[c].eta);
            bool capped = false;
            Operator f = eigenbasis_frame_omega(*eig, x_frame, sqrt_eta, eb->params, &capped);
            result.capped = result.capped || capped;
            frame += dw[c] * f;
            if (!p.y_zero) {
                comp -= (kI * sqrt_eta * dw[c]) * p.y;
            }
            if (options_.keep_omegas) {
                Operator w = v * f * v.adjoint();
                if (!p.y_zero) {
                    w -= kI * sqrt_eta * p.y;
                }
                result.omegas.push_back(w);
            }
            continue;
        }
        SynthesisInfo info;
        Operator w = synthesize(law, state, channels_[c], &info);
        result.capped = result.capped || info.capped;
        result.degenerate = result.degenerate || info.degenerate;
        comp += dw[c] * w;
        if (options_.keep_omegas) {
            result.omegas.push_back(std::move(w));
        }
    }
    if (!any) {
        return Operator();
    }
    if (eig != nullptr) {
        comp += eig->vectors * frame * eig->vectors.adjoint();
    }
    return comp;
}

StepResult Stepper::repair(Operator rho, long long step_index, StepResult result, bool need_eig) const {
    rho = (rho + rho.adjoint()) * 0.5;
    double tr = rho.trace().real();
    if (!rho.allFinite() || !(tr > 0.0)) {
        throw IntegrationError(step_index, "state became non-finite or lost its trace");
    }
    rho /= tr;
    if (!need_eig) {
        // A Cholesky factorization of rho + probe * 1 certifies that no
        // eigenvalue lies below -probe, so clipping would be a no-op at
        // that level.
        Operator shifted = rho;
        shifted.diagonal().array() += kPositivityProbe;
        Eigen::LLT<Operator> llt(shifted);
        if (llt.info() == Eigen::Success) {
            result.state = QuantumState(std::move(rho));
            return result;
        }
    }
    Eigen::SelfAdjointEigenSolver<Operator> solver(rho);
    if (solver.info() != Eigen::Success) {
        throw IntegrationError(step_index, "eigensolver failed during positivity repair");
    }
    EigDecomposition e;
    e.values = solver.eigenvalues().reverse();
    e.vectors = solver.eigenvectors().rowwise().reverse();
    double clipped = 0.0;
    for (int k = 0; k < e.dim(); k++) {
        if (e.values(k) < 0.0) {
            clipped -= e.values(k);
        }
    }
    if (clipped > options_.clip_mass_limit) {
        throw IntegrationError(step_index, "positivity repair would remove " + std::to_string(clipped) +
                                               " of trace (limit " + std::to_string(options_.clip_mass_limit) + ")");
    }
    if (clipped > 0.0) {
        e.values = e.values.cwiseMax(0.0);
        e.values /= e.values.sum();
        rho = e.reconstruct();
    }
    result.clipped_mass = clipped;
    result.state = QuantumState(std::move(rho));
    result.state.set_eig(std::move(e));
    return result;
}

StepResult Stepper::step(const QuantumState &state, const ControlInputs &controls, double dt,
                         std::span<const double> dw, long long step_index) const {
    const size_t nc = channels_.size();
    if (dw.size() != nc || controls.feedback.size() != nc) {
        throw ValidationError("", "step: need one noise increment and one feedback law per channel");
    }
    if (!(dt > 0.0)) {
        throw ValidationError("dt", "must be positive");
    }
    const int n = state.dim();
    if (nc > 0 && channels_[0].L.rows() != n) {
        throw ValidationError("", "step: state and channel dimensions differ");
    }
    StepResult result;
    result.readouts.resize(nc);
    result.signals.resize(nc);
    for (size_t c = 0; c < nc; c++) {
        result.signals[c] = signal(state, channels_[c]);
        result.readouts[c] = std::sqrt(channels_[c].eta) * result.signals[c] + dw[c] / dt;
    }

    if (options_.integrator == Integrator::ito_euler) {
        std::vector<Operator> omegas;
        omegas.reserve(nc);
        for (size_t c = 0; c < nc; c++) {
            SynthesisInfo info;
            omegas.push_back(synthesize(controls.feedback[c], state, channels_[c], &info));
            result.capped = result.capped || info.capped;
            result.degenerate = result.degenerate || info.degenerate;
        }
        Operator rho = drift_map(state, channels_, omegas, controls.omega, dt);
        for (size_t c = 0; c < nc; c++) {
            rho += noise_superop(state, channels_[c], omegas[c]) * dw[c];
        }
        if (options_.keep_omegas) {
            result.omegas = std::move(omegas);
        }
        return repair(std::move(rho), step_index, std::move(result), true);
    }

    Operator h = feedback_generator(state, controls, dt, dw, result);
    Operator rho = state.rho();
    for (size_t c = 0; c < nc; c++) {
        rho = apply_kraus(rho, c, result.readouts[c], dt);
    }
    double tr = rho.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw IntegrationError(step_index, "measurement update produced a non-positive trace");
    }
    rho /= tr;
    if (h.size() > 0) {
        Operator u = unitary_exp(h);
        rho = u * rho * u.adjoint();
    }
    return repair(std::move(rho), step_index, std::move(result), needs_eigenbasis(controls));
}

StepResult step(const QuantumState &state, std::span<const MeasurementChannel> channels,
                const ControlInputs &controls, double dt, std::span<const double> dw, const StepOptions &options) {
    Stepper stepper(std::vector<MeasurementChannel>(channels.begin(), channels.end()), options);
    return stepper.step(state, controls, dt, dw);
}

}  // namespace ncqf
