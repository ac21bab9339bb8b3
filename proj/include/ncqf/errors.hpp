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

#ifndef NCQF_ERRORS_HPP
#define NCQF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ncqf {

/// Malformed input: bad dimensions, non-Hermitian matrices, bad config fields.
struct ValidationError : std::invalid_argument {
    std::string field;
    ValidationError(std::string field_name, const std::string &message)
        : std::invalid_argument(field_name.empty() ? message : field_name + ": " + message),
          field(std::move(field_name)) {
    }
};

/// A routine was called on a state it is not defined for.
struct PreconditionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Numerical breakdown while integrating a trajectory.
struct IntegrationError : std::runtime_error {
    long long step_index;
    IntegrationError(long long step, const std::string &message)
        : std::runtime_error("step " + std::to_string(step) + ": " + message), step_index(step) {
    }
};

}  // namespace ncqf

#endif
