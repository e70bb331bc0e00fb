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
#include "metaoc/lds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>

#include "metaoc/rng.hpp"

namespace metaoc {

namespace {

constexpr double kNormSlack = 1e-9;            // slack on norm comparisons
constexpr double kReconstructionTol = 1e-9;    // relative Frobenius error
constexpr double kConditionLimit = 1e8;        // eigenbasis condition cutoff

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

void SystemBounds::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("SystemBounds: ") + name +
                        " must be strictly positive");
    }
  };
  positive(kappa_A, "kappa_A");
  positive(kappa_B, "kappa_B");
  positive(kappa_w, "kappa_w");
  positive(kappa, "kappa");
  positive(G, "G");
  positive(beta, "beta");
  positive(S, "S");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("SystemBounds: gamma must lie in (0, 1)");
  }
}

SystemMatrices::SystemMatrices(Matrix A, Matrix B, const SystemBounds& bounds)
    : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() < 1 || A_.rows() != A_.cols()) {
    throw std::invalid_argument("SystemMatrices: A must be square, n >= 1");
  }
  if (B_.rows() != A_.rows() || B_.cols() < 1) {
    throw std::invalid_argument("SystemMatrices: B must be n x m, m >= 1");
  }
  if (operator_norm(A_) > bounds.kappa_A + kNormSlack) {
    throw std::invalid_argument("SystemMatrices: ||A|| exceeds kappa_A");
  }
  if (operator_norm(B_) > bounds.kappa_B + kNormSlack) {
    throw std::invalid_argument("SystemMatrices: ||B|| exceeds kappa_B");
  }
}

Vector step(const SystemMatrices& sys, const Vector& x, const Vector& u,
            const Vector& w) {
  if (x.size() != sys.n() || u.size() != sys.m() || w.size() != sys.n()) {
    throw std::invalid_argument("step: dimension mismatch");
  }
  return sys.A() * x + sys.B() * u + w;
}

namespace {

Vector unit_ones(int n) {
  Vector v = Vector::Ones(n);
  return v / std::sqrt(static_cast<double>(n));
}

Vector gaussian_vector(Rng& rng, int n) {
  Vector g(n);
  for (int i = 0; i < n; ++i) g(i) = rng.normal();
  return g;
}

Vector uniform_ball_draw(std::uint64_t seed, long t, int n, double radius) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
  Vector g = gaussian_vector(rng, n);
  const double nrm = g.norm();
  if (nrm == 0.0) return Vector::Zero(n);
  const double u = rng.uniform();
  return radius * std::pow(u, 1.0 / n) * (g / nrm);
}

}  // namespace

Vector emit_disturbance(const DisturbanceSource& src, long t) {
  if (t <= 0) return Vector::Zero(src.n);
  switch (src.kind) {
    case DisturbanceKind::kZero:
      return Vector::Zero(src.n);
    case DisturbanceKind::kUniformBall:
      return uniform_ball_draw(src.seed, t, src.n, src.kappa_w);
    case DisturbanceKind::kSinusoidal: {
      // Fixed period and direction so that every task sees the same
      // frequency; the seed only shifts the phase.
      Rng rng(mix_seed(src.seed, 0));
      const double phase = 2.0 * M_PI * rng.uniform();
      const double omega = 2.0 * M_PI / 16.0;
      return (src.kappa_w * std::sin(omega * t + phase)) * unit_ones(src.n);
    }
    case DisturbanceKind::kSignAlternating: {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      return sign * src.kappa_w * unit_ones(src.n);
    }
    case DisturbanceKind::kRandomWalk: {
      // Recomputed from t = 1 so emission stays a pure function of (seed, t).
      Vector w = Vector::Zero(src.n);
      const double sigma = src.kappa_w / 4.0;
      for (long j = 1; j <= t; ++j) {
        Rng rng(mix_seed(src.seed, static_cast<std::uint64_t>(j)));
        w += sigma * gaussian_vector(rng, src.n);
        const double nrm = w.norm();
        if (nrm > src.kappa_w) w *= src.kappa_w / nrm;
      }
      return w;
    }
  }
  return Vector::Zero(src.n);
}

DisturbanceKind disturbance_kind_from_string(const std::string& name) {
  if (name == "zero") return DisturbanceKind::kZero;
  if (name == "uniform-ball") return DisturbanceKind::kUniformBall;
  if (name == "sinusoidal") return DisturbanceKind::kSinusoidal;
  if (name == "sign-alternating") return DisturbanceKind::kSignAlternating;
  if (name == "seeded-random-walk") return DisturbanceKind::kRandomWalk;
  throw ConfigError("unknown disturbance kind: " + name);
}

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kZero:
      return "zero";
    case DisturbanceKind::kUniformBall:
      return "uniform-ball";
    case DisturbanceKind::kSinusoidal:
      return "sinusoidal";
    case DisturbanceKind::kSignAlternating:
      return "sign-alternating";
    case DisturbanceKind::kRandomWalk:
      return "seeded-random-walk";
  }
  return "zero";
}

Matrix riccati_gain(const Matrix& A, const Matrix& B) {
  const int n = static_cast<int>(A.rows());
  const Matrix Q = Matrix::Identity(n, n);
  const Matrix R = Matrix::Identity(B.cols(), B.cols());
  Matrix P = Q;
  const int max_iter = 10000;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix BtP = B.transpose() * P;
    const Matrix gain_lhs = R + BtP * B;
    const Matrix Pnext =
        Q + A.transpose() * (P - BtP.transpose() * gain_lhs.ldlt().solve(BtP)) * A;
    const double delta = (Pnext - P).norm();
    P = Pnext;
    if (delta <= 1e-13 * std::max(1.0, P.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SynthesisError("riccati_gain: fixed-point iteration did not converge");
  }
  const Matrix BtP = B.transpose() * P;
  return (R + BtP * B).ldlt().solve(BtP * A);
}

namespace {

// Real block-diagonal eigendecomposition of a real square matrix:
// C = V L V^{-1} with 1x1 blocks for real eigenvalues and rotation-scaled
// 2x2 blocks for conjugate pairs.
bool real_eigen_factors(const Matrix& C, Matrix& V, Matrix& L) {
  const int n = static_cast<int>(C.rows());
  Eigen::EigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success) return false;
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  V = Matrix::Zero(n, n);
  L = Matrix::Zero(n, n);
  int col = 0;
  const double imag_tol = 1e-12 * std::max(1.0, C.norm());
  while (col < n) {
    const std::complex<double> lambda = vals(col);
    if (std::abs(lambda.imag()) <= imag_tol) {
      V.col(col) = vecs.col(col).real();
      L(col, col) = lambda.real();
      ++col;
    } else {
      if (col + 1 >= n) return false;
      V.col(col) = vecs.col(col).real();
      V.col(col + 1) = vecs.col(col).imag();
      L(col, col) = lambda.real();
      L(col, col + 1) = lambda.imag();
      L(col + 1, col) = -lambda.imag();
      L(col + 1, col + 1) = lambda.real();
      col += 2;  // skip the conjugate
    }
  }
  return true;
}

struct Factorization {
  Matrix H;
  Matrix Hinv;
  Matrix L;
  bool ok = false;
};

Factorization eigen_factorization(const Matrix& C) {
  Factorization f;
  Matrix V, L;
  if (!real_eigen_factors(C, V, L)) return f;
  Eigen::FullPivLU<Matrix> lu(V);
  if (!lu.isInvertible()) return f;
  Matrix Vinv = lu.inverse();
  const double nv = operator_norm(V);
  const double nvi = operator_norm(Vinv);
  if (!(nv > 0.0) || !(nvi > 0.0)) return f;
  if (nv * nvi > kConditionLimit) return f;
  // Balance so that ||H|| and ||H^{-1}|| meet at sqrt(cond(V)).
  const double c = std::sqrt(nvi / nv);
  f.H = c * V;
  f.Hinv = Vinv / c;
  f.L = L;
  f.ok = true;
  return f;
}

Factorization schur_factorization(const Matrix& C) {
  Factorization f;
  Eigen::RealSchur<Matrix> schur(C);
  if (schur.info() != Eigen::Success) return f;
  f.H = schur.matrixU();
  f.Hinv = schur.matrixU().transpose();
  f.L = schur.matrixT();
  f.ok = true;
  return f;
}

StabilityVerdict check_factorization(const Factorization& f, const Matrix& C,
                                     const Matrix& K, double kappa,
                                     double gamma) {
  StabilityVerdict verdict;
  const double norm_L = operator_norm(f.L);
  const double norm_K = operator_norm(K);
  const double norm_H = operator_norm(f.H);
  const double norm_Hinv = operator_norm(f.Hinv);

  const double rec_err = (f.H * f.L * f.Hinv - C).norm();
  const double rec_scale = std::max(1.0, C.norm());
  if (rec_err > kReconstructionTol * rec_scale) {
    verdict.violation = "A - BK = H L H^-1 reconstruction tolerance";
    return verdict;
  }
  if (norm_L > 1.0 - gamma + kNormSlack) {
    verdict.violation = "||L|| <= 1 - gamma";
    return verdict;
  }
  if (norm_K > kappa + kNormSlack) {
    verdict.violation = "||K|| <= kappa";
    return verdict;
  }
  if (norm_H > kappa + kNormSlack) {
    verdict.violation = "||H|| <= kappa";
    return verdict;
  }
  if (norm_Hinv > kappa + kNormSlack) {
    verdict.violation = "||H^-1|| <= kappa";
    return verdict;
  }
  verdict.accepted = true;
  verdict.certificate.K = K;
  verdict.certificate.H_mat = f.H;
  verdict.certificate.L_mat = f.L;
  verdict.certificate.kappa_achieved =
      std::max({norm_K, norm_H, norm_Hinv});
  verdict.certificate.gamma_achieved = 1.0 - norm_L;
  return verdict;
}

}  // namespace

StabilityVerdict verify_strong_stability(const SystemMatrices& sys,
                                         const Matrix& K, double kappa,
                                         double gamma) {
  if (K.rows() != sys.m() || K.cols() != sys.n()) {
    throw std::invalid_argument("verify_strong_stability: K must be m x n");
  }
  const Matrix C = sys.A() - sys.B() * K;

  Factorization eig = eigen_factorization(C);
  if (eig.ok) {
    StabilityVerdict v = check_factorization(eig, C, K, kappa, gamma);
    if (v.accepted) return v;
  }
  // Defective or out-of-bounds eigenbasis: orthogonal Schur basis, where
  // ||L|| equals ||A - BK||.
  Factorization schur = schur_factorization(C);
  if (schur.ok) {
    return check_factorization(schur, C, K, kappa, gamma);
  }
  StabilityVerdict verdict;
  verdict.violation = "factorization failure";
  return verdict;
}

StabilityCertificate synthesize_stabilizer(const SystemMatrices& sys,
                                           const SystemBounds& bounds) {
  bounds.validate();
  std::ostringstream diag;
  try {
    const Matrix K = riccati_gain(sys.A(), sys.B());
    StabilityVerdict v =
        verify_strong_stability(sys, K, bounds.kappa, bounds.gamma);
    if (v.accepted) return v.certificate;
    diag << "riccati gain rejected (" << v.violation << ")";
  } catch (const SynthesisError& e) {
    diag << e.what();
  }
  // The open loop may already contract enough.
  const Matrix K0 = Matrix::Zero(sys.m(), sys.n());
  StabilityVerdict v0 =
      verify_strong_stability(sys, K0, bounds.kappa, bounds.gamma);
  if (v0.accepted) return v0.certificate;
  diag << "; K=0 rejected (" << v0.violation << ")";
  throw SynthesisError("synthesize_stabilizer: " + diag.str());
}

}  // namespace metaoc
