/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef METAOC_COMMON_HPP
#define METAOC_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace metaoc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when Riccati iteration or certificate construction cannot
/// produce a verified stabilizer.
class SynthesisError : public std::runtime_error {
 public:
  explicit SynthesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a rollout state exceeds the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on non-finite values in numeric kernels.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on inconsistent or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Spectral (operator 2-) norm.
double operator_norm(const Matrix& m);

}  // namespace metaoc

#endif  // METAOC_COMMON_HPP
