#include <cmath>

#include "doctest.h"
#include "metaoc/lds.hpp"
#include "metaoc/rng.hpp"

using namespace metaoc;

namespace {

SystemBounds default_bounds() {
  SystemBounds b;
  b.kappa = std::sqrt(2.0);
  return b;
}

SystemMatrices benchmark_style_system(std::uint64_t salt) {
  // diag in [0.25, 0.35], off-diag in [0, 0.1]
  Matrix A(2, 2);
  A << 0.25 + 0.01 * (salt % 10), 0.03 + 0.005 * (salt % 7),
      0.02 + 0.007 * (salt % 5), 0.27 + 0.008 * (salt % 9);
  Matrix B(2, 1);
  B << 0.5, 0.5;
  return SystemMatrices(A, B, default_bounds());
}

}  // namespace

TEST_CASE("step matches hand arithmetic") {
  SystemBounds bounds = default_bounds();
  Matrix A = 0.5 * Matrix::Identity(2, 2);
  Matrix B(2, 1);
  B << 1.0, 0.0;
  SystemMatrices sys(A, B, bounds);

  Vector x(2), u(1), w(2);
  x << 1.0, 1.0;
  u << 1.0;
  w << 0.0, 0.0;
  Vector next = step(sys, x, u, w);
  CHECK(next(0) == doctest::Approx(1.5));
  CHECK(next(1) == doctest::Approx(0.5));

  CHECK(step(sys, Vector::Zero(2), Vector::Zero(1), Vector::Zero(2)).norm() ==
        0.0);

  SystemMatrices eye(Matrix::Identity(2, 2), B, bounds);
  Vector wd(2);
  wd << 0.3, -0.3;
  Vector pure = step(eye, Vector::Zero(2), Vector::Zero(1), wd);
  CHECK(pure(0) == doctest::Approx(0.3));
  CHECK(pure(1) == doctest::Approx(-0.3));
}

TEST_CASE("step rejects dimension mismatches") {
  SystemMatrices sys = benchmark_style_system(1);
  CHECK_THROWS_AS(step(sys, Vector::Zero(3), Vector::Zero(1), Vector::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(step(sys, Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("step is linear") {
  SystemMatrices sys = benchmark_style_system(3);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Vector x1(2), x2(2), u1(1), u2(1), w1(2), w2(2);
    for (int j = 0; j < 2; ++j) {
      x1(j) = rng.normal();
      x2(j) = rng.normal();
      w1(j) = rng.normal();
      w2(j) = rng.normal();
    }
    u1(0) = rng.normal();
    u2(0) = rng.normal();
    Vector lhs = step(sys, x1 + x2, u1 + u2, w1 + w2);
    Vector rhs = step(sys, x1, u1, w1) + step(sys, x2, u2, w2) -
                 step(sys, Vector::Zero(2), Vector::Zero(1), Vector::Zero(2));
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("system matrices are checked against the bounds") {
  SystemBounds bounds = default_bounds();
  CHECK_THROWS_AS(
      SystemMatrices(2.0 * Matrix::Identity(2, 2), Matrix::Ones(2, 1), bounds),
      std::invalid_argument);
  CHECK_THROWS_AS(SystemMatrices(0.5 * Matrix::Identity(2, 2),
                                 3.0 * Matrix::Ones(2, 1), bounds),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SystemMatrices(Matrix::Zero(2, 3), Matrix::Ones(2, 1), bounds),
      std::invalid_argument);
}

TEST_CASE("bounds validation") {
  SystemBounds b = default_bounds();
  CHECK_NOTHROW(b.validate());
  b.gamma = 1.0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b.gamma = 0.5;
  b.kappa_w = -1.0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
}

TEST_CASE("verify_strong_stability accepts a contracting diagonal loop") {
  SystemBounds bounds = default_bounds();
  // A - B K = 0.4 I with K = 0.
  SystemMatrices sys(0.4 * Matrix::Identity(2, 2), 0.5 * Matrix::Ones(2, 1), bounds);
  StabilityVerdict v = verify_strong_stability(sys, Matrix::Zero(1, 2), 1.0, 0.5);
  REQUIRE(v.accepted);
  CHECK(operator_norm(v.certificate.L_mat) == doctest::Approx(0.4));
  CHECK(v.certificate.gamma_achieved == doctest::Approx(0.6));
  CHECK(v.certificate.kappa_achieved <= 1.0 + 1e-9);
}

TEST_CASE("verify_strong_stability names the violated inequality") {
  SystemBounds bounds = default_bounds();
  SystemMatrices sys(0.9 * Matrix::Identity(2, 2), 0.5 * Matrix::Ones(2, 1), bounds);
  StabilityVerdict v = verify_strong_stability(sys, Matrix::Zero(1, 2), 1.0, 0.5);
  CHECK_FALSE(v.accepted);
  CHECK(v.violation == "||L|| <= 1 - gamma");
}

TEST_CASE("zero closed loop verifies for any kappa >= 1 and gamma < 1") {
  SystemBounds bounds = default_bounds();
  SystemMatrices sys(Matrix::Zero(2, 2), 0.5 * Matrix::Ones(2, 1), bounds);
  for (double gamma : {0.1, 0.5, 0.99}) {
    StabilityVerdict v =
        verify_strong_stability(sys, Matrix::Zero(1, 2), 1.0, gamma);
    CHECK(v.accepted);
  }
}

TEST_CASE("certificate reconstruction stays within tolerance") {
  SystemBounds bounds = default_bounds();
  for (std::uint64_t salt : {1, 4, 8}) {
    SystemMatrices sys = benchmark_style_system(salt);
    StabilityCertificate cert = synthesize_stabilizer(sys, bounds);
    Matrix C = sys.A() - sys.B() * cert.K;
    Matrix rebuilt =
        cert.H_mat * cert.L_mat * cert.H_mat.fullPivLu().inverse();
    CHECK((rebuilt - C).norm() <= 1e-9 * std::max(1.0, C.norm()));
  }
}

TEST_CASE("synthesize_stabilizer on simple systems") {
  SystemBounds bounds = default_bounds();
  SUBCASE("A = 0.5 I, B = I") {
    SystemMatrices sys(0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                       bounds);
    StabilityCertificate cert = synthesize_stabilizer(sys, bounds);
    CHECK(operator_norm(sys.A() - sys.B() * cert.K) < 0.5);
    CHECK(cert.gamma_achieved >= 0.5);
    // K = 0 already sits on the gamma = 0.5 boundary via L = A, H = I.
    StabilityVerdict open_loop =
        verify_strong_stability(sys, Matrix::Zero(2, 2), 1.0, 0.5);
    CHECK(open_loop.accepted);
  }
  SUBCASE("A = 0 yields K = 0") {
    SystemMatrices sys(Matrix::Zero(2, 2), Matrix::Identity(2, 2), bounds);
    StabilityCertificate cert = synthesize_stabilizer(sys, bounds);
    CHECK(cert.K.norm() <= 1e-12);
    CHECK(operator_norm(cert.L_mat) <= 1e-12);
    CHECK(cert.gamma_achieved == doctest::Approx(1.0));
  }
}

TEST_CASE("synthesis fails loudly on an uncontrollable unstable system") {
  SystemBounds loose = default_bounds();
  loose.kappa_A = 2.0;
  // No input authority to speak of: the Riccati iteration cannot settle and
  // the open loop does not contract.
  SystemMatrices sys(1.5 * Matrix::Identity(2, 2),
                     1e-9 * Matrix::Ones(2, 1), loose);
  CHECK_THROWS_AS(synthesize_stabilizer(sys, loose), SynthesisError);
}

TEST_CASE("defective closed loop falls back to the orthogonal factorization") {
  SystemBounds bounds = default_bounds();
  Matrix A(2, 2);
  A << 0.3, 0.2, 0.0, 0.3;  // one eigenvector for the double eigenvalue
  SystemMatrices sys(A, 0.5 * Matrix::Ones(2, 1), bounds);
  StabilityVerdict v =
      verify_strong_stability(sys, Matrix::Zero(1, 2), std::sqrt(2.0), 0.5);
  REQUIRE(v.accepted);
  const Matrix& H = v.certificate.H_mat;
  CHECK((H.transpose() * H - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK(operator_norm(v.certificate.L_mat) == doctest::Approx(operator_norm(A)));
}

TEST_CASE("synthesized gains verify at the benchmark kappa and gamma") {
  SystemBounds bounds = default_bounds();
  for (std::uint64_t salt = 0; salt < 12; ++salt) {
    SystemMatrices sys = benchmark_style_system(salt);
    StabilityCertificate cert = synthesize_stabilizer(sys, bounds);
    StabilityVerdict v =
        verify_strong_stability(sys, cert.K, std::sqrt(2.0), 0.5);
    CHECK(v.accepted);
    StabilityVerdict own = verify_strong_stability(
        sys, cert.K, cert.kappa_achieved, cert.gamma_achieved);
    CHECK(own.accepted);
  }
}

TEST_CASE("acceptance implies geometric contraction of the closed loop") {
  SystemBounds bounds = default_bounds();
  const double kappa = std::sqrt(2.0);
  const double gamma = 0.5;
  for (std::uint64_t salt : {2, 5, 9}) {
    SystemMatrices sys = benchmark_style_system(salt);
    StabilityCertificate cert = synthesize_stabilizer(sys, bounds);
    Matrix C = sys.A() - sys.B() * cert.K;
    Matrix P = Matrix::Identity(2, 2);
    for (int j = 0; j <= 50; ++j) {
      CHECK(operator_norm(P) <= kappa * kappa * std::pow(1.0 - gamma, j) + 1e-9);
      P = C * P;
    }
  }
}

TEST_CASE("disturbance emission: padding, determinism, bound") {
  for (DisturbanceKind kind :
       {DisturbanceKind::kZero, DisturbanceKind::kUniformBall,
        DisturbanceKind::kSinusoidal, DisturbanceKind::kSignAlternating,
        DisturbanceKind::kRandomWalk}) {
    DisturbanceSource src{kind, 1.0, 7, 2};
    CHECK(emit_disturbance(src, 0).norm() == 0.0);
    CHECK(emit_disturbance(src, -3).norm() == 0.0);
    for (long t = 1; t <= 200; ++t) {
      Vector w = emit_disturbance(src, t);
      CHECK(w.size() == 2);
      CHECK(w.norm() <= 1.0 + 1e-12);
      Vector again = emit_disturbance(src, t);
      CHECK((w - again).norm() == 0.0);
    }
  }
}

TEST_CASE("sign-alternating matches the closed form") {
  DisturbanceSource src{DisturbanceKind::kSignAlternating, 1.0, 0, 2};
  Vector w3 = emit_disturbance(src, 3);
  CHECK(w3(0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(w3(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  Vector w4 = emit_disturbance(src, 4);
  CHECK(w4(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("uniform ball stays inside the ball over many samples") {
  DisturbanceSource src{DisturbanceKind::kUniformBall, 1.0, 99, 3};
  double max_norm = 0.0;
  for (long t = 1; t <= 10000; ++t) {
    max_norm = std::max(max_norm, emit_disturbance(src, t).norm());
  }
  CHECK(max_norm <= 1.0);
  CHECK(max_norm > 0.5);  // actually fills the ball
}

TEST_CASE("disturbance kind names round-trip") {
  for (const char* name : {"zero", "uniform-ball", "sinusoidal",
                           "sign-alternating", "seeded-random-walk"}) {
    CHECK(to_string(disturbance_kind_from_string(name)) == name);
  }
  CHECK_THROWS_AS(disturbance_kind_from_string("bogus"), ConfigError);
}
