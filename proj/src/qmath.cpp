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

#include "ncqf/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncqf/errors.hpp"

namespace ncqf {

namespace ops {

Operator identity(int dim) {
    return Operator::Identity(dim, dim);
}

Operator sigma_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator sigma_y() {
    Operator m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Operator sigma_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator sigma_minus() {
    Operator m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

Operator sigma_plus() {
    Operator m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

}  // namespace ops

Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator kron(std::span<const Operator> factors) {
    if (factors.empty()) {
        return Operator::Identity(1, 1);
    }
    Operator out = factors[0];
    for (size_t k = 1; k < factors.size(); k++) {
        out = kron(out, factors[k]);
    }
    return out;
}

Operator kron(std::initializer_list<Operator> factors) {
    return kron(std::span<const Operator>(factors.begin(), factors.size()));
}

Ket kron(const Ket &a, const Ket &b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

namespace {

Operator single_qubit_factor(char c, bool extended) {
    switch (c) {
        case 'I':
            return ops::identity(2);
        case 'X':
            return ops::sigma_x();
        case 'Y':
            return ops::sigma_y();
        case 'Z':
            return ops::sigma_z();
        default:
            break;
    }
    if (extended) {
        switch (c) {
            case '-':
                return ops::sigma_minus();
            case '+':
                return ops::sigma_plus();
            case 'e':
                return basis_ket(2, 0) * basis_ket(2, 0).adjoint();
            case 'g':
                return basis_ket(2, 1) * basis_ket(2, 1).adjoint();
            default:
                break;
        }
    }
    throw ValidationError("", std::string("unknown operator symbol '") + c + "'");
}

Operator product_of(std::string_view spec, bool extended) {
    if (spec.empty()) {
        throw ValidationError("", "empty operator string");
    }
    std::vector<Operator> factors;
    factors.reserve(spec.size());
    for (char c : spec) {
        factors.push_back(single_qubit_factor(c, extended));
    }
    return kron(std::span<const Operator>(factors));
}

}  // namespace

Operator pauli_string(std::string_view spec) {
    return product_of(spec, false);
}

Operator product_operator(std::string_view spec) {
    return product_of(spec, true);
}

Operator embed(const Operator &op, int qubit, int num_qubits) {
    if (qubit < 0 || qubit >= num_qubits || op.rows() != 2 || op.cols() != 2) {
        throw ValidationError("", "embed: bad qubit index or operator shape");
    }
    Operator left = ops::identity(1 << qubit);
    Operator right = ops::identity(1 << (num_qubits - qubit - 1));
    return kron({left, op, right});
}

Ket basis_ket(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw ValidationError("", "basis index out of range");
    }
    Ket k = Ket::Zero(dim);
    k(index) = 1.0;
    return k;
}

Ket basis_ket(std::string_view bits) {
    if (bits.empty()) {
        throw ValidationError("", "empty basis label");
    }
    int index = 0;
    for (char c : bits) {
        int b;
        if (c == 'e' || c == '0') {
            b = 0;
        } else if (c == 'g' || c == '1') {
            b = 1;
        } else {
            throw ValidationError("", std::string("bad basis symbol '") + c + "'");
        }
        index = 2 * index + b;
    }
    return basis_ket(1 << bits.size(), index);
}

Operator projector(const Ket &psi) {
    return psi * psi.adjoint();
}

Operator commutator(const Operator &a, const Operator &b) {
    return a * b - b * a;
}

Operator anticommutator(const Operator &a, const Operator &b) {
    return a * b + b * a;
}

cplx expect(const Operator &rho, const Operator &op) {
    // tr(rho op) without forming the product.
    return (rho.transpose().array() * op.array()).sum();
}

double hermiticity_defect(const Operator &a) {
    if (a.rows() != a.cols()) {
        return INFINITY;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator &a, double tol) {
    return hermiticity_defect(a) <= tol;
}

Operator EigDecomposition::reconstruct() const {
    return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

std::vector<std::pair<int, int>> EigDecomposition::degenerate_blocks() const {
    std::vector<std::pair<int, int>> blocks;
    int n = dim();
    int begin = 0;
    for (int k = 1; k <= n; k++) {
        if (k == n || values(k - 1) - values(k) > degeneracy_tol) {
            blocks.emplace_back(begin, k);
            begin = k;
        }
    }
    return blocks;
}

EigDecomposition herm_eig(const Operator &a, double hermitian_tol, double degeneracy_tol) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ValidationError("", "herm_eig: matrix must be square and non-empty");
    }
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (hermiticity_defect(a) > hermitian_tol * scale) {
        throw ValidationError("", "herm_eig: matrix is not Hermitian");
    }
    Operator h = (a + a.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Operator> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("", "herm_eig: eigensolver failed");
    }
    EigDecomposition out;
    out.degeneracy_tol = degeneracy_tol;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

Operator unitary_exp(const Operator &h) {
    EigDecomposition e = herm_eig(h, 1e-8);
    Eigen::VectorXcd phases(e.dim());
    for (int k = 0; k < e.dim(); k++) {
        phases(k) = std::exp(-kI * e.values(k));
    }
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

QuantumState::QuantumState(Operator rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
        throw ValidationError("", "density matrix must be square and non-empty");
    }
}

QuantumState QuantumState::from_ket(const Ket &psi) {
    double n = psi.norm();
    if (n == 0 || !std::isfinite(n)) {
        throw ValidationError("", "ket has zero or non-finite norm");
    }
    Ket u = psi / n;
    return QuantumState(projector(u));
}

QuantumState QuantumState::from_density(Operator rho, double tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw ValidationError("", "density matrix must be square and non-empty");
    }
    if (hermiticity_defect(rho) > tol) {
        throw ValidationError("", "density matrix is not Hermitian");
    }
    cplx tr = rho.trace();
    if (std::abs(tr) < tol) {
        throw ValidationError("", "density matrix has zero trace");
    }
    rho = (rho + rho.adjoint()) * (0.5 / tr.real());
    QuantumState s(std::move(rho));
    if (s.min_eigenvalue() < -tol) {
        throw ValidationError("", "density matrix is not positive semidefinite");
    }
    return s;
}

int QuantumState::num_qubits() const {
    int n = 0;
    while ((1 << n) < dim()) {
        n++;
    }
    if ((1 << n) != dim()) {
        throw PreconditionError("state dimension is not a power of two");
    }
    return n;
}

const EigDecomposition &QuantumState::eig() const {
    if (!eig_) {
        eig_ = herm_eig(rho_, 1e-8);
    }
    return *eig_;
}

void QuantumState::set_eig(EigDecomposition eig) {
    eig_ = std::move(eig);
}

double QuantumState::purity() const {
    return rho_.cwiseAbs2().sum();
}

bool QuantumState::is_pure(double tol) const {
    return std::abs(1.0 - purity()) <= tol;
}

Ket QuantumState::dominant_ket() const {
    return eig().vectors.col(0);
}

double QuantumState::trace_defect() const {
    return std::abs(rho_.trace() - 1.0);
}

double QuantumState::min_eigenvalue() const {
    return eig().values(dim() - 1);
}

QuantumState product_state(std::span<const QuantumState> factors) {
    std::vector<Operator> rhos;
    rhos.reserve(factors.size());
    for (const auto &f : factors) {
        rhos.push_back(f.rho());
    }
    return QuantumState(kron(std::span<const Operator>(rhos)));
}

double concurrence(const QuantumState &state) {
    if (state.dim() != 4) {
        throw ValidationError("", "concurrence: state must be two-qubit");
    }
    Operator yy = kron(ops::sigma_y(), ops::sigma_y());
    Operator tilde = yy * state.rho().conjugate() * yy;
    const EigDecomposition &e = state.eig();
    Eigen::VectorXcd roots(4);
    for (int k = 0; k < 4; k++) {
        roots(k) = std::sqrt(std::max(0.0, e.values(k)));
    }
    Operator sqrt_rho = e.vectors * roots.asDiagonal() * e.vectors.adjoint();
    Operator m = sqrt_rho * tilde * sqrt_rho;
    Eigen::VectorXd mu = herm_eig(m, 1e-8).values;
    double l[4];
    for (int k = 0; k < 4; k++) {
        l[k] = std::sqrt(std::max(0.0, mu(k)));
    }
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double fidelity(const QuantumState &state, const Ket &psi) {
    if (psi.size() != state.dim()) {
        throw ValidationError("", "fidelity: dimension mismatch");
    }
    return (psi.adjoint() * state.rho() * psi)(0, 0).real();
}

Operator hadamard_n(int num_qubits) {
    Operator h = (ops::sigma_x() + ops::sigma_z()) / std::sqrt(2.0);
    Operator out = Operator::Identity(1, 1);
    for (int k = 0; k < num_qubits; k++) {
        out = kron(out, h);
    }
    return out;
}

namespace bell {

Ket phi_plus() {
    return (basis_ket("ee") + basis_ket("gg")) / std::sqrt(2.0);
}

Ket phi_minus() {
    return (basis_ket("ee") - basis_ket("gg")) / std::sqrt(2.0);
}

Ket psi_plus() {
    return (basis_ket("eg") + basis_ket("ge")) / std::sqrt(2.0);
}

Ket psi_minus() {
    return (basis_ket("eg") - basis_ket("ge")) / std::sqrt(2.0);
}

}  // namespace bell

}  // namespace ncqf
