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
#include "metaoc/dac.hpp"

#include <cmath>

namespace metaoc {

DacParams::DacParams(std::vector<Matrix> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw std::invalid_argument("DacParams: needs at least one block");
  }
  const auto rows = blocks_[0].rows();
  const auto cols = blocks_[0].cols();
  for (const Matrix& b : blocks_) {
    if (b.rows() != rows || b.cols() != cols) {
      throw std::invalid_argument("DacParams: blocks must share one shape");
    }
    if (!b.allFinite()) {
      throw std::invalid_argument("DacParams: entries must be finite");
    }
  }
}

DacParams DacParams::zero(int H, int m, int n) {
  std::vector<Matrix> blocks(static_cast<size_t>(H), Matrix::Zero(m, n));
  return DacParams(std::move(blocks));
}

bool DacParams::same_shape(const DacParams& other) const {
  return H() == other.H() && m() == other.m() && n() == other.n();
}

double DacParams::norm() const {
  double sq = 0.0;
  for (const Matrix& b : blocks_) sq += b.squaredNorm();
  return std::sqrt(sq);
}

double DacParams::dot(const DacParams& other) const {
  if (!same_shape(other)) {
    throw std::invalid_argument("DacParams::dot: shape mismatch");
  }
  double acc = 0.0;
  for (int k = 0; k < H(); ++k) {
    acc += blocks_[k].cwiseProduct(other.blocks_[k]).sum();
  }
  return acc;
}

DacParams& DacParams::operator+=(const DacParams& other) {
  if (!same_shape(other)) {
    throw std::invalid_argument("DacParams: shape mismatch");
  }
  for (int k = 0; k < H(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

DacParams& DacParams::operator-=(const DacParams& other) {
  if (!same_shape(other)) {
    throw std::invalid_argument("DacParams: shape mismatch");
  }
  for (int k = 0; k < H(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

DacParams& DacParams::operator*=(double s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

Vector DacParams::vectorize() const {
  const int per = m() * n();
  Vector v(static_cast<long>(H()) * per);
  for (int k = 0; k < H(); ++k) {
    v.segment(static_cast<long>(k) * per, per) =
        Eigen::Map<const Vector>(blocks_[k].data(), per);
  }
  return v;
}

DacParams DacParams::from_vector(const Vector& v, int H, int m, int n) {
  if (v.size() != static_cast<long>(H) * m * n) {
    throw std::invalid_argument("DacParams::from_vector: size mismatch");
  }
  DacParams out = DacParams::zero(H, m, n);
  const int per = m * n;
  for (int k = 0; k < H; ++k) {
    out.blocks_[static_cast<size_t>(k)] =
        Eigen::Map<const Matrix>(v.data() + static_cast<long>(k) * per, m, n);
  }
  return out;
}

DacDomain DacDomain::make(const SystemBounds& bounds, int H, int m, int n) {
  if (H < 1 || m < 1 || n < 1) {
    throw std::invalid_argument("DacDomain: H, m, n must be >= 1");
  }
  DacDomain dom;
  dom.H = H;
  dom.m = m;
  dom.n = n;
  dom.radii.resize(static_cast<size_t>(H));
  const double base = std::pow(bounds.kappa, 3) * bounds.kappa_B;
  for (int k = 1; k <= H; ++k) {
    dom.radii[static_cast<size_t>(k - 1)] = base * std::pow(1.0 - bounds.gamma, k);
  }
  return dom;
}

double DacDomain::diameter() const {
  double sq = 0.0;
  for (double r : radii) sq += r * r;
  return 2.0 * std::sqrt(sq);
}

bool DacDomain::contains(const DacParams& M, double tol) const {
  if (M.H() != H || M.m() != m || M.n() != n) return false;
  for (int k = 1; k <= H; ++k) {
    if (M.block(k).norm() > radius(k) + tol) return false;
  }
  return true;
}

DisturbanceHistory::DisturbanceHistory(int H, int n)
    : entries_(static_cast<size_t>(H), Vector::Zero(n)) {
  if (H < 1 || n < 1) {
    throw std::invalid_argument("DisturbanceHistory: H, n must be >= 1");
  }
}

void DisturbanceHistory::push(const Vector& w) {
  if (w.size() != entries_[0].size()) {
    throw std::invalid_argument("DisturbanceHistory: dimension mismatch");
  }
  for (size_t k = entries_.size() - 1; k > 0; --k) {
    entries_[k] = entries_[k - 1];
  }
  entries_[0] = w;
}

const Vector& DisturbanceHistory::before(int k) const {
  return entries_.at(static_cast<size_t>(k - 1));
}

int horizon(long T, double gamma) {
  if (T < 2) throw std::invalid_argument("horizon: T must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("horizon: gamma must lie in (0, 1)");
  }
  const double ratio = std::log(static_cast<double>(T)) / std::log(1.0 / (1.0 - gamma));
  // Snap near-integer ratios before taking the ceiling.
  const double rounded = std::round(ratio);
  double h = (std::abs(ratio - rounded) < 1e-9) ? rounded : std::ceil(ratio);
  return std::max(1, static_cast<int>(h));
}

DacParams project(const DacParams& M, const DacDomain& dom) {
  if (M.H() != dom.H || M.m() != dom.m || M.n() != dom.n) {
    throw std::invalid_argument("project: shape mismatch with domain");
  }
  DacParams out = M;
  for (int k = 1; k <= dom.H; ++k) {
    const double nrm = out.block(k).norm();
    const double r = dom.radius(k);
    if (nrm > r) out.block(k) *= r / nrm;
  }
  return out;
}

Vector control_action(const Matrix& K, const DacParams& M, const Vector& x,
                      const DisturbanceHistory& hist) {
  if (K.cols() != x.size() || K.rows() != M.m() || M.n() != x.size() ||
      hist.H() != M.H()) {
    throw std::invalid_argument("control_action: shape mismatch");
  }
  Vector u = -K * x;
  for (int k = 1; k <= M.H(); ++k) {
    u.noalias() += M.block(k) * hist.before(k);
  }
  return u;
}

Vector recover_disturbance(const SystemMatrices& sys, const Vector& x,
                           const Vector& u, const Vector& x_next) {
  if (x.size() != sys.n() || u.size() != sys.m() || x_next.size() != sys.n()) {
    throw std::invalid_argument("recover_disturbance: dimension mismatch");
  }
  return x_next - sys.A() * x - sys.B() * u;
}

}  // namespace metaoc
