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

#include "ncqf/magic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ncqf/errors.hpp"

namespace ncqf::msd {

Ket f0() {
    double beta = 0.5 * std::acos(1.0 / std::sqrt(3.0));
    Ket k(2);
    k << std::cos(beta), std::exp(kI * (std::numbers::pi / 4.0)) * std::sin(beta);
    return k;
}

Ket f1() {
    Operator h = (ops::sigma_x() + ops::sigma_z()) / std::sqrt(2.0);
    return ops::sigma_y() * h * f0();
}

Operator f_gate() {
    Operator m(2, 2);
    m << 1, 1, kI, -kI;
    return m * (std::exp(kI * (std::numbers::pi / 4.0)) / std::sqrt(2.0));
}

const std::array<std::string, 4> &stabilizers() {
    static const std::array<std::string, 4> s = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    return s;
}

const Operator &codespace_projector() {
    static const Operator p = [] {
        Operator acc = Operator::Identity(32, 32);
        for (const auto &s : stabilizers()) {
            acc = acc * (Operator::Identity(32, 32) + pauli_string(s));
        }
        return Operator(acc / 16.0);
    }();
    return p;
}

namespace {

Ket power5(const Ket &k) {
    Ket out = k;
    for (int q = 1; q < 5; q++) {
        out = kron(out, k);
    }
    return out;
}

}  // namespace

const Ket &logical_f1() {
    static const Ket k = Ket(std::sqrt(6.0) * (codespace_projector() * power5(f0())));
    return k;
}

const Ket &logical_f0() {
    static const Ket k = Ket(std::sqrt(6.0) * (codespace_projector() * power5(f1())));
    return k;
}

QuantumState noisy_input(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw ValidationError("eps", "must lie in [0, 1]");
    }
    Operator one = (1.0 - eps) * projector(f0()) + eps * projector(f1());
    Operator rho = one;
    for (int q = 1; q < 5; q++) {
        rho = kron(rho, one);
    }
    return QuantumState(rho);
}

namespace {

// Unnormalized weights of |F0L> and |F1L> after projecting the noisy input.
double weight_bad(double e) {
    return std::pow(e, 5) + 5.0 * e * e * std::pow(1.0 - e, 3);
}

double weight_good(double e) {
    return std::pow(1.0 - e, 5) + 5.0 * std::pow(e, 3) * (1.0 - e) * (1.0 - e);
}

}  // namespace

namespace {

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw ValidationError("eps", "must lie in [0, 1]");
    }
}

}  // namespace

double ps_analytic(double eps) {
    check_eps(eps);
    return (weight_bad(eps) + weight_good(eps)) / 6.0;
}

double eps_out_analytic(double eps) {
    check_eps(eps);
    return weight_bad(eps) / (weight_bad(eps) + weight_good(eps));
}

double threshold_analytic() {
    return 0.5 * (1.0 - std::sqrt(3.0 / 7.0));
}

double stabilizer_sum(const QuantumState &state) {
    if (state.dim() != 32) {
        throw ValidationError("", "stabilizer_sum: state must be five-qubit");
    }
    static const std::array<Operator, 4> ops = [] {
        std::array<Operator, 4> out;
        for (int j = 0; j < 4; j++) {
            out[j] = pauli_string(stabilizers()[j]);
        }
        return out;
    }();
    double sum = 0.0;
    for (const auto &s : ops) {
        sum += expect(state.rho(), s).real();
    }
    return sum;
}

DecodeResult decode(const QuantumState &state) {
    if (state.dim() != 32) {
        throw ValidationError("", "decode: state must be five-qubit");
    }
    const Ket &good = logical_f1();
    const Ket &bad = logical_f0();
    Operator basis(32, 2);
    basis.col(0) = good;
    basis.col(1) = bad;
    Operator logical = basis.adjoint() * state.rho() * basis;
    DecodeResult r;
    r.code_weight = logical.trace().real();
    if (r.code_weight <= 0.0) {
        r.eps_out = std::numeric_limits<double>::quiet_NaN();
        r.rho_out = Operator::Zero(2, 2);
        return r;
    }
    logical /= r.code_weight;
    Operator out_basis(2, 2);
    out_basis.col(0) = f0();
    out_basis.col(1) = f1();
    r.rho_out = out_basis * logical * out_basis.adjoint();
    r.eps_out = 1.0 - logical(0, 0).real();
    return r;
}

}  // namespace ncqf::msd
