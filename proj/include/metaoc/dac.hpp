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
#ifndef METAOC_DAC_HPP
#define METAOC_DAC_HPP

#include <vector>

#include "metaoc/lds.hpp"

namespace metaoc {

/// Disturbance-action policy parameter: H blocks M^[1..H], each m x n.
class DacParams {
 public:
  DacParams() = default;
  explicit DacParams(std::vector<Matrix> blocks);

  static DacParams zero(int H, int m, int n);

  int H() const { return static_cast<int>(blocks_.size()); }
  int m() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_[0].rows()); }
  int n() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_[0].cols()); }

  /// 1-based block access, matching the M^[k] notation.
  const Matrix& block(int k) const { return blocks_.at(k - 1); }
  Matrix& block(int k) { return blocks_.at(k - 1); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  bool same_shape(const DacParams& other) const;

  /// Frobenius norm of the stacked parameter.
  double norm() const;
  double dot(const DacParams& other) const;

  DacParams& operator+=(const DacParams& other);
  DacParams& operator-=(const DacParams& other);
  DacParams& operator*=(double s);
  friend DacParams operator+(DacParams a, const DacParams& b) { return a += b; }
  friend DacParams operator-(DacParams a, const DacParams& b) { return a -= b; }
  friend DacParams operator*(double s, DacParams a) { return a *= s; }

  /// Stacked column-major vector view (used by the enclosing-ball report).
  Vector vectorize() const;
  /// Inverse of vectorize for the given shape.
  static DacParams from_vector(const Vector& v, int H, int m, int n);

 private:
  std::vector<Matrix> blocks_;
};

/// The feasible set: per-block Frobenius balls of radius
/// kappa^3 kappa_B (1 - gamma)^k.
struct DacDomain {
  int H = 0;
  int m = 0;
  int n = 0;
  std::vector<double> radii;  // radii[k-1] = r_k

  static DacDomain make(const SystemBounds& bounds, int H, int m, int n);

  double radius(int k) const { return radii.at(k - 1); }
  /// Diameter of the product of balls: 2 sqrt(sum r_k^2).
  double diameter() const;
  bool contains(const DacParams& M, double tol = 1e-9) const;
};

/// Ring buffer of the last H recovered disturbances; reads before warm-up
/// are zero.
class DisturbanceHistory {
 public:
  DisturbanceHistory(int H, int n);

  /// Appends w_t, discarding w_{t-H}.
  void push(const Vector& w);
  /// w_{t-k} for k = 1..H, where t is one past the last pushed index.
  const Vector& before(int k) const;
  int H() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<Vector> entries_;  // entries_[k-1] = w_{t-k}
};

/// History length H = ceil(ln T / ln(1/(1-gamma))), at least 1.
int horizon(long T, double gamma);

/// Block-wise Euclidean projection onto the domain.
DacParams project(const DacParams& M, const DacDomain& dom);

/// The control law u = -K x + sum_k M^[k] w_{t-k}.
Vector control_action(const Matrix& K, const DacParams& M, const Vector& x,
                      const DisturbanceHistory& hist);

/// w_t = x_{t+1} - A x_t - B u_t.
Vector recover_disturbance(const SystemMatrices& sys, const Vector& x,
                           const Vector& u, const Vector& x_next);

}  // namespace metaoc

#endif  // METAOC_DAC_HPP
