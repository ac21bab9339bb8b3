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

#include "ncqf/feedback.hpp"

#include <algorithm>
#include <cmath>

#include "ncqf/errors.hpp"

namespace ncqf {

void MeasurementChannel::validate(int dim) const {
    if (L.rows() != dim || L.cols() != dim) {
        throw ValidationError(label, "measurement operator has wrong dimension");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ValidationError(label, "efficiency must lie in [0, 1]");
    }
    if (!L.allFinite()) {
        throw ValidationError(label, "measurement operator has non-finite entries");
    }
}

double signal(const QuantumState &state, const MeasurementChannel &channel) {
    return 2.0 * expect(state.rho(), channel.L).real();
}

std::pair<Operator, Operator> split_xy(const Operator &L) {
    Operator adj = L.adjoint();
    return {(L + adj) * 0.5, (L - adj) * 0.5};
}

Operator measurement_superop(const QuantumState &state, const MeasurementChannel &channel) {
    const Operator &rho = state.rho();
    double s = signal(state, channel);
    return std::sqrt(channel.eta) * (channel.L * rho + rho * channel.L.adjoint() - s * rho);
}

Operator dissipator(const Operator &rho, const Operator &a) {
    Operator ada = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

Operator basic_ncqf(const QuantumState &state, const MeasurementChannel &channel, double purity_tol) {
    channel.validate(state.dim());
    if (!state.is_pure(purity_tol)) {
        throw PreconditionError("basic_ncqf: state is not pure (purity " + std::to_string(state.purity()) + ")");
    }
    auto [x, y] = split_xy(channel.L);
    return kI * (commutator(state.rho(), x) - y);
}

Operator noise_superop(const QuantumState &state, const MeasurementChannel &channel, const Operator &omega) {
    return measurement_superop(state, channel) + kI * commutator(state.rho(), omega);
}

namespace {

// K = {dX, rho} + [Y, rho], so that b_L[rho] = sqrt(eta) K.
Operator k_operator(const QuantumState &state, const Operator &x, const Operator &y) {
    const Operator &rho = state.rho();
    double half_s = expect(rho, x).real();
    Operator dx = x;
    dx.diagonal().array() -= half_s;
    return anticommutator(dx, rho) + commutator(y, rho);
}

void require_hermitian(const Operator &op, int dim, const char *what) {
    if (op.rows() != dim || op.cols() != dim) {
        throw ValidationError(what, "wrong dimension");
    }
    if (!is_hermitian(op, 1e-9 * std::max(1.0, op.cwiseAbs().maxCoeff()))) {
        throw ValidationError(what, "must be Hermitian");
    }
}

}  // namespace

NoiseReport noise_magnitude(const QuantumState &state, const MeasurementChannel &channel, const Operator &omega) {
    channel.validate(state.dim());
    require_hermitian(omega, state.dim(), "omega");
    auto [x, y] = split_xy(channel.L);
    const Operator &rho = state.rho();
    Operator k = k_operator(state, x, y);
    Operator c = commutator(rho, omega);
    double sqrt_eta = std::sqrt(channel.eta);
    NoiseReport r;
    r.na = c.cwiseAbs2().sum();
    r.nb = (2.0 * kI * sqrt_eta * expect(commutator(k, rho), omega)).real();
    r.nc = channel.eta * k.cwiseAbs2().sum();
    r.total = r.na + r.nb + r.nc;
    return r;
}

Operator eigenbasis_frame_omega(const EigDecomposition &eig, const Operator &x_frame, double sqrt_eta,
                                const EigenbasisParams &params, bool *capped, NccDiagnostics *ncc) {
    const int n = eig.dim();
    const Eigen::VectorXd &lam = eig.values;
    int rank = 0;
    while (rank < n && lam(rank) > params.rank_tol) {
        rank++;
    }

    // Cluster labels: chains of near-equal eigenvalues inside the support,
    // and one cluster for the kernel.
    std::vector<int> cluster(n);
    std::vector<std::pair<int, int>> blocks;
    const double gap = params.degeneracy_tol * (n > 0 ? std::abs(lam(0)) : 0.0);
    int begin = 0;
    for (int k = 1; k <= rank; k++) {
        if (k == rank || lam(k - 1) - lam(k) > gap) {
            blocks.emplace_back(begin, k);
            begin = k;
        }
    }
    for (size_t b = 0; b < blocks.size(); b++) {
        for (int k = blocks[b].first; k < blocks[b].second; k++) {
            cluster[k] = static_cast<int>(b);
        }
    }
    for (int k = rank; k < n; k++) {
        cluster[k] = -1;
    }

    bool rotated = false;
    Operator w;
    Operator xf;
    for (const auto &[b0, b1] : blocks) {
        int sz = b1 - b0;
        if (sz < 2) {
            continue;
        }
        if (!rotated) {
            w = Operator::Identity(n, n);
            rotated = true;
        }
        Operator sub = x_frame.block(b0, b0, sz, sz);
        sub = (sub + sub.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<Operator> solver(sub);
        w.block(b0, b0, sz, sz) = solver.eigenvectors();
    }
    const Operator &x = rotated ? (xf = w.adjoint() * x_frame * w) : x_frame;

    if (ncc != nullptr) {
        double half_s = 0.0;
        for (int k = 0; k < n; k++) {
            half_s += std::max(0.0, lam(k)) * x(k, k).real();
        }
        ncc->support_rank = rank;
        ncc->half_signal = half_s;
        ncc->diagonal.resize(rank);
        ncc->max_deviation = 0.0;
        for (int k = 0; k < rank; k++) {
            ncc->diagonal[k] = x(k, k).real();
            ncc->max_deviation = std::max(ncc->max_deviation, std::abs(x(k, k).real() - half_s));
        }
    }

    Operator a = Operator::Zero(n, n);
    bool hit_cap = false;
    for (int m = 0; m < n; m++) {
        double lm = m < rank ? lam(m) : 0.0;
        for (int q = m + 1; q < n; q++) {
            if (cluster[m] == cluster[q]) {
                continue;
            }
            double lq = q < rank ? lam(q) : 0.0;
            cplx v = kI * sqrt_eta * x(m, q) * ((lm + lq) / (lm - lq));
            double mag = std::abs(v);
            if (mag > params.omega_max) {
                v *= params.omega_max / mag;
                hit_cap = true;
            }
            a(m, q) = v;
            a(q, m) = std::conj(v);
        }
    }
    if (params.support_phase != 0.0) {
        for (int k = 0; k < rank; k++) {
            a(k, k) += params.support_phase;
        }
    }
    if (capped != nullptr) {
        *capped = hit_cap;
    }
    if (rotated) {
        return w * a * w.adjoint();
    }
    return a;
}

namespace {

Operator frame_of(const EigDecomposition &e, const Operator &op) {
    return e.vectors.adjoint() * op * e.vectors;
}

}  // namespace

NccDiagnostics ncc_exists_mixed(const QuantumState &state, const MeasurementChannel &channel, double tol,
                                const EigenbasisParams &params) {
    channel.validate(state.dim());
    const EigDecomposition &e = state.eig();
    auto [x, y] = split_xy(channel.L);
    NccDiagnostics d;
    bool capped = false;
    eigenbasis_frame_omega(e, frame_of(e, x), 1.0, params, &capped, &d);
    d.exists = d.max_deviation <= tol;
    return d;
}

EigenbasisResult eigenbasis_ncqf(const QuantumState &state, const MeasurementChannel &channel,
                                 const EigenbasisParams &params) {
    channel.validate(state.dim());
    const EigDecomposition &e = state.eig();
    auto [x, y] = split_xy(channel.L);
    double sqrt_eta = std::sqrt(channel.eta);
    EigenbasisResult r;
    Operator frame = eigenbasis_frame_omega(e, frame_of(e, x), sqrt_eta, params, &r.capped, &r.ncc);
    r.ncc.exists = r.ncc.max_deviation <= 1e-8;
    r.omega = e.vectors * frame * e.vectors.adjoint() - kI * sqrt_eta * y;
    if (params.nullspace_block) {
        require_hermitian(*params.nullspace_block, state.dim(), "nullspace_block");
        int rank = r.ncc.support_rank;
        int n = state.dim();
        Operator kernel = e.vectors.rightCols(n - rank);
        Operator perp = kernel * kernel.adjoint();
        r.omega += perp * (*params.nullspace_block) * perp;
    }
    r.omega = (r.omega + r.omega.adjoint()) * 0.5;
    return r;
}

RestrictedScalarResult restricted_min_scalar(const QuantumState &state, const MeasurementChannel &channel,
                                             const Operator &theta, double tol) {
    channel.validate(state.dim());
    require_hermitian(theta, state.dim(), "theta");
    auto [x, y] = split_xy(channel.L);
    const Operator &rho = state.rho();
    Operator k = k_operator(state, x, y);
    Operator ct = commutator(theta, rho);
    double sqrt_eta = std::sqrt(channel.eta);

    RestrictedScalarResult r;
    r.a = ct.cwiseAbs2().sum();
    r.b = (2.0 * kI * sqrt_eta * expect(commutator(k, rho), theta)).real();
    r.c = channel.eta * k.cwiseAbs2().sum();
    r.discriminant = r.b * r.b - 4.0 * r.a * r.c;
    if (r.a <= tol) {
        r.degenerate = true;
        r.f = 0.0;
        r.n_min = r.c;
    } else {
        r.f = -r.b / (2.0 * r.a);
        r.n_min = r.c - r.b * r.b / (4.0 * r.a);
    }
    r.cancellable = r.n_min <= tol;
    return r;
}

RestrictedMultiResult restricted_min_multi(const QuantumState &state, const MeasurementChannel &channel,
                                           std::span<const Operator> thetas, double tol) {
    channel.validate(state.dim());
    if (thetas.empty()) {
        throw ValidationError("thetas", "need at least one control direction");
    }
    for (const auto &t : thetas) {
        require_hermitian(t, state.dim(), "theta");
    }
    auto [x, y] = split_xy(channel.L);
    const Operator &rho = state.rho();
    Operator k = k_operator(state, x, y);
    Operator kr = commutator(k, rho);
    double sqrt_eta = std::sqrt(channel.eta);
    const int m = static_cast<int>(thetas.size());

    std::vector<Operator> comms;
    comms.reserve(m);
    for (const auto &t : thetas) {
        comms.push_back(commutator(rho, t));
    }
    RestrictedMultiResult r;
    r.a.resize(m, m);
    r.b.resize(m);
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            r.a(i, j) = (comms[i].adjoint() * comms[j]).trace().real();
        }
        r.b(i) = (2.0 * kI * sqrt_eta * expect(kr, thetas[i])).real();
    }
    r.c = channel.eta * k.cwiseAbs2().sum();

    Eigen::MatrixXd hess = r.a + r.a.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hess);
    const Eigen::VectorXd &ev = solver.eigenvalues();
    double cut = std::max(tol, 1e-12 * std::max(0.0, ev.maxCoeff()));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
    int live = 0;
    for (int i = 0; i < m; i++) {
        if (ev(i) > cut) {
            inv(i) = 1.0 / ev(i);
            live++;
        }
    }
    Eigen::MatrixXd pinv = solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
    r.f = -pinv * r.b;
    r.n_min = r.c - 0.5 * r.b.dot(pinv * r.b);
    r.degenerate = live == 0;
    r.cancellable = r.n_min <= tol;
    return r;
}

Operator population_ncqf(const Operator &target_projector, const MeasurementChannel &channel, double omega_psi,
                         const std::optional<Operator> &b_block) {
    const int n = static_cast<int>(target_projector.rows());
    channel.validate(n);
    require_hermitian(target_projector, n, "target_projector");
    const Operator &p = target_projector;
    if (std::abs(p.trace().real() - 1.0) > 1e-8 || (p * p - p).cwiseAbs().maxCoeff() > 1e-8) {
        throw ValidationError("target_projector", "must be a rank-one projector");
    }
    auto [x, y] = split_xy(channel.L);
    double sqrt_eta = std::sqrt(channel.eta);
    Operator omega = omega_psi * p - kI * sqrt_eta * commutator(p, x) - kI * sqrt_eta * y;
    if (b_block) {
        require_hermitian(*b_block, n, "b_block");
        Operator perp = Operator::Identity(n, n) - p;
        omega += perp * (*b_block) * perp;
    }
    return (omega + omega.adjoint()) * 0.5;
}

Operator nc_drift(const QuantumState &state, std::span<const MeasurementChannel> channels,
                  std::span<const Operator> omegas, const Operator &omega_open_loop) {
    if (channels.size() != omegas.size()) {
        throw ValidationError("omegas", "one feedback operator per channel is required");
    }
    const Operator &rho = state.rho();
    Operator d = kI * commutator(rho, omega_open_loop);
    for (size_t c = 0; c < channels.size(); c++) {
        Operator b = measurement_superop(state, channels[c]);
        d += kI * commutator(b, omegas[c]);
        d += dissipator(rho, channels[c].L);
        d += dissipator(rho, omegas[c]);
    }
    return d;
}

std::string feedback_kind(const FeedbackLaw &law) {
    static const char *names[] = {"none", "fixed", "basic", "eigenbasis", "restricted", "population"};
    return names[law.index()];
}

bool is_active(const FeedbackLaw &law) {
    return !std::holds_alternative<NoFeedback>(law);
}

Operator synthesize(const FeedbackLaw &law, const QuantumState &state, const MeasurementChannel &channel,
                    SynthesisInfo *info) {
    SynthesisInfo local;
    SynthesisInfo &out = info != nullptr ? *info : local;
    out = {};
    const int n = state.dim();
    if (std::holds_alternative<NoFeedback>(law)) {
        return Operator::Zero(n, n);
    }
    if (const auto *f = std::get_if<FixedFeedback>(&law)) {
        return f->omega;
    }
    if (const auto *f = std::get_if<BasicFeedback>(&law)) {
        return basic_ncqf(state, channel, f->purity_tol);
    }
    if (const auto *f = std::get_if<EigenbasisFeedback>(&law)) {
        EigenbasisResult r = eigenbasis_ncqf(state, channel, f->params);
        out.capped = r.capped;
        return r.omega;
    }
    if (const auto *f = std::get_if<RestrictedFeedback>(&law)) {
        if (f->mode == RestrictedFeedback::Mode::scalar) {
            if (f->thetas.size() != 1) {
                throw ValidationError("thetas", "scalar mode takes exactly one control direction");
            }
            RestrictedScalarResult r = restricted_min_scalar(state, channel, f->thetas[0]);
            out.degenerate = r.degenerate;
            return r.f * f->thetas[0];
        }
        RestrictedMultiResult r = restricted_min_multi(state, channel, f->thetas);
        out.degenerate = r.degenerate;
        Operator omega = Operator::Zero(n, n);
        for (size_t j = 0; j < f->thetas.size(); j++) {
            omega += r.f(static_cast<Eigen::Index>(j)) * f->thetas[j];
        }
        return omega;
    }
    const auto &p = std::get<PopulationFeedback>(law);
    return population_ncqf(p.target_projector, channel, p.omega_psi, p.b_block);
}

}  // namespace ncqf
