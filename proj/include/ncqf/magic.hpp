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

// Five-qubit magic state distillation: the code, the magic states and the
// closed-form success probability and output error of the projective protocol.

#ifndef NCQF_MAGIC_HPP
#define NCQF_MAGIC_HPP

#include <array>
#include <string>

#include "ncqf/qmath.hpp"

namespace ncqf::msd {

/// cos(beta)|0> + e^{i pi/4} sin(beta)|1>, cos(2 beta) = 1/sqrt(3).
Ket f0();
/// sigma_y H |F0>, orthogonal to |F0>.
Ket f1();
/// Clifford gate with |F0> and |F1> as eigenvectors.
Operator f_gate();

const std::array<std::string, 4> &stabilizers();
/// prod_j (1 + S_j) / 16.
const Operator &codespace_projector();
/// sqrt(6) Pi |F0>^{(x)5}; decodes to |F0>.
const Ket &logical_f1();
/// sqrt(6) Pi |F1>^{(x)5}; decodes to |F1>.
const Ket &logical_f0();

/// rho_eps^{(x)5} with rho_eps = (1 - eps)|F0><F0| + eps |F1><F1|.
QuantumState noisy_input(double eps);

double ps_analytic(double eps);
double eps_out_analytic(double eps);
/// Input error at which eps_out = eps, (1 - sqrt(3/7)) / 2.
double threshold_analytic();

double stabilizer_sum(const QuantumState &state);

struct DecodeResult {
    /// tr(Pi rho).
    double code_weight = 0.0;
    /// 1 - <F0| rho_out |F0>; NaN when code_weight vanishes.
    double eps_out = 0.0;
    /// Decoded single-qubit state.
    Operator rho_out;
};

/// Projects onto the code space and maps |F1L> -> |F0>, |F0L> -> |F1>.
DecodeResult decode(const QuantumState &state);

}  // namespace ncqf::msd

#endif
