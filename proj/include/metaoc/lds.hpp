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
#ifndef METAOC_LDS_HPP
#define METAOC_LDS_HPP

#include <cstdint>
#include <string>

#include "metaoc/common.hpp"

namespace metaoc {

/// Problem constants: norm bounds on the system, the disturbance and the
/// costs, plus the strong-stability pair (kappa, gamma).
struct SystemBounds {
  double kappa_A = 1.0;  ///< bound on the spectral norm of A
  double kappa_B = 1.0;  ///< bound on the spectral norm of B
  double kappa_w = 1.0;  ///< bound on the disturbance norm
  double kappa = 1.0;    ///< strong-stability constant
  double gamma = 0.5;    ///< strong-stability margin, in (0, 1)
  double G = 1.25;       ///< cost gradient constant
  double beta = 0.625;   ///< cost magnitude constant
  double S = 10.0;       ///< state/action magnitude bound

  /// Throws ConfigError unless all fields are positive and 0 < gamma < 1.
  void validate() const;
};

/// A discrete-time linear system x' = A x + B u + w with norms checked
/// against the bounds at construction.
class SystemMatrices {
 public:
  SystemMatrices(Matrix A, Matrix B, const SystemBounds& bounds);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  int n() const { return static_cast<int>(A_.rows()); }
  int m() const { return static_cast<int>(B_.cols()); }

 private:
  Matrix A_;
  Matrix B_;
};

/// Witness of (kappa, gamma)-strong stability: A - B K = H L H^{-1} with
/// ||L|| <= 1 - gamma_achieved and ||K||, ||H||, ||H^{-1}|| <= kappa_achieved.
struct StabilityCertificate {
  Matrix K;
  Matrix H_mat;
  Matrix L_mat;
  double kappa_achieved = 0.0;
  double gamma_achieved = 0.0;
};

/// Outcome of verify_strong_stability: either a certificate or the name of
/// the first violated inequality.
struct StabilityVerdict {
  bool accepted = false;
  StabilityCertificate certificate;
  std::string violation;  // empty when accepted
};

enum class DisturbanceKind {
  kZero,
  kUniformBall,
  kSinusoidal,
  kSignAlternating,
  kRandomWalk,
};

DisturbanceKind disturbance_kind_from_string(const std::string& name);
std::string to_string(DisturbanceKind kind);

/// Deterministic bounded disturbance stream. Emission depends only on
/// (kind, seed, t), so sources are freely shareable across threads.
struct DisturbanceSource {
  DisturbanceKind kind = DisturbanceKind::kZero;
  double kappa_w = 1.0;
  std::uint64_t seed = 0;
  int n = 1;
};

/// One step of the dynamics: A x + B u + w.
Vector step(const SystemMatrices& sys, const Vector& x, const Vector& u,
            const Vector& w);

/// Disturbance at time t; t <= 0 yields the zero vector (history padding).
Vector emit_disturbance(const DisturbanceSource& src, long t);

/// Solves the discrete algebraic Riccati equation with Q = R = I by
/// fixed-point iteration and returns the associated feedback gain.
Matrix riccati_gain(const Matrix& A, const Matrix& B);

/// Riccati gain followed by verification against bounds.kappa/gamma.
/// Falls back to K = 0 when the open loop already contracts. Throws
/// SynthesisError with diagnostics if no candidate verifies.
StabilityCertificate synthesize_stabilizer(const SystemMatrices& sys,
                                           const SystemBounds& bounds);

/// Builds an H L H^{-1} factorization of A - B K from an eigendecomposition
/// (real block-diagonal form), or from a real Schur form when the
/// eigenvector basis is too ill-conditioned, and checks the strong-stability
/// inequalities for the requested (kappa, gamma).
StabilityVerdict verify_strong_stability(const SystemMatrices& sys,
                                         const Matrix& K, double kappa,
                                         double gamma);

}  // namespace metaoc

#endif  // METAOC_LDS_HPP
