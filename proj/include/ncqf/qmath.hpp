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

#ifndef NCQF_QMATH_HPP
#define NCQF_QMATH_HPP

#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ncqf {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

namespace ops {
Operator identity(int dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
/// Lowering operator |g><e| with |e> = |0>.
Operator sigma_minus();
Operator sigma_plus();
}  // namespace ops

Operator kron(const Operator &a, const Operator &b);
Operator kron(std::span<const Operator> factors);
Operator kron(std::initializer_list<Operator> factors);
Ket kron(const Ket &a, const Ket &b);

/// Tensor product of single-qubit factors. Qubit 0 is the leftmost character.
/// Accepts I, X, Y, Z only.
Operator pauli_string(std::string_view spec);

/// Like pauli_string but also accepts '-' (sigma_minus), '+' (sigma_plus),
/// 'e' (|e><e|) and 'g' (|g><g|).
Operator product_operator(std::string_view spec);

/// Single-qubit operator acting on `qubit` of an n-qubit register.
Operator embed(const Operator &op, int qubit, int num_qubits);

/// Computational basis ket from a string over {e,g,0,1}; e == 0.
Ket basis_ket(std::string_view bits);
Ket basis_ket(int dim, int index);

Operator projector(const Ket &psi);
Operator commutator(const Operator &a, const Operator &b);
Operator anticommutator(const Operator &a, const Operator &b);
cplx expect(const Operator &rho, const Operator &op);

double hermiticity_defect(const Operator &a);
bool is_hermitian(const Operator &a, double tol = 1e-10);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
struct EigDecomposition {
    Eigen::VectorXd values;
    Operator vectors;
    double degeneracy_tol = 1e-9;

    int dim() const { return static_cast<int>(values.size()); }
    Operator reconstruct() const;
    /// Consecutive index ranges [begin, end) whose eigenvalues lie within
    /// degeneracy_tol of their neighbour.
    std::vector<std::pair<int, int>> degenerate_blocks() const;
};

EigDecomposition herm_eig(const Operator &a, double hermitian_tol = 1e-10, double degeneracy_tol = 1e-9);

/// exp(-i h) for Hermitian h.
Operator unitary_exp(const Operator &h);

class QuantumState {
   public:
    QuantumState() = default;
    explicit QuantumState(Operator rho);
    static QuantumState from_ket(const Ket &psi);
    /// Normalizes the trace and checks Hermiticity and positivity.
    static QuantumState from_density(Operator rho, double tol = 1e-8);

    const Operator &rho() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    int num_qubits() const;

    /// Cached; compute once before sharing an instance across threads.
    const EigDecomposition &eig() const;
    void set_eig(EigDecomposition eig);
    bool has_eig() const { return eig_.has_value(); }

    double purity() const;
    bool is_pure(double tol = 1e-9) const;
    /// Eigenvector of the largest eigenvalue.
    Ket dominant_ket() const;
    double trace_defect() const;
    double min_eigenvalue() const;

   private:
    Operator rho_;
    mutable std::optional<EigDecomposition> eig_;
};

QuantumState product_state(std::span<const QuantumState> factors);

/// Wootters concurrence of a two-qubit state.
double concurrence(const QuantumState &state);

/// <psi| rho |psi> for normalized psi.
double fidelity(const QuantumState &state, const Ket &psi);

/// Hadamard on every qubit, (sigma_x + sigma_z)^{(x) n} / 2^{n/2}.
Operator hadamard_n(int num_qubits);

namespace bell {
Ket phi_plus();
Ket phi_minus();
Ket psi_plus();
Ket psi_minus();
}  // namespace bell

}  // namespace ncqf

#endif
