#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "trotkit/statevector.hpp"

using namespace trotkit;

namespace {

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Eigen::Matrix4cd cnot() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

StateVector bell_pair() {
  StateVector psi = StateVector::zero_state(2);
  psi = apply_1q(psi, hadamard(), 0);
  return apply_2q(psi, cnot(), 0, 1);
}

StateVector ghz(int n) {
  StateVector psi = StateVector::zero_state(n);
  psi = apply_1q(psi, hadamard(), 0);
  for (int q = 1; q < n; ++q) psi = apply_2q(psi, cnot(), 0, q);
  return psi;
}

}  // namespace

TEST_CASE("qubit 0 is the most significant amplitude bit") {
  StateVector psi = StateVector::zero_state(2);
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  psi = apply_1q(psi, x, 0);  // |10>
  CHECK(std::abs(psi.amplitudes()(2) - cplx(1, 0)) < 1e-15);
}

TEST_CASE("identity gate leaves amplitudes unchanged") {
  Rng rng(1);
  StateVector psi = StateVector::random_haar(3, rng);
  StateVector out = apply_1q(psi, Eigen::Matrix2cd::Identity(), 1);
  CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-15);
}

TEST_CASE("Hadamard on |0> gives the plus state") {
  StateVector psi = apply_1q(StateVector::zero_state(1), hadamard(), 0);
  CHECK(std::abs(psi.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("two CNOTs cancel") {
  Rng rng(2);
  StateVector psi = StateVector::random_haar(3, rng);
  StateVector out = apply_2q(apply_2q(psi, cnot(), 0, 2), cnot(), 0, 2);
  CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-14);
}

TEST_CASE("non-unitary gates and bad indices are rejected") {
  StateVector psi = StateVector::zero_state(2);
  Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity() * 2.0;
  CHECK_THROWS_AS(apply_1q(psi, bad, 0), std::invalid_argument);
  CHECK_THROWS_AS(apply_1q(psi, Eigen::Matrix2cd::Identity(), 2),
                  std::out_of_range);
  CHECK_THROWS_AS(apply_2q(psi, cnot(), 1, 1), std::invalid_argument);
}

TEST_CASE("apply_pauli agrees with dense application on random words") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + int(rng.uniform_index(4));
    StateVector psi = StateVector::random_haar(n, rng);
    PauliString p(n, rng.uniform_index(1ull << n), rng.uniform_index(1ull << n),
                  int(rng.uniform_index(4)));
    Eigen::VectorXcd want = p.to_dense() * psi.amplitudes();
    CHECK((apply_pauli(psi, p).amplitudes() - want).norm() < 1e-12);
  }
}

TEST_CASE("apply_pauli special cases") {
  StateVector psi = StateVector::zero_state(1);
  CHECK((apply_pauli(psi, PauliString::from_text("I")).amplitudes() -
         psi.amplitudes())
            .norm() < 1e-15);
  StateVector flipped = apply_pauli(psi, PauliString::from_text("X"));
  CHECK(std::abs(flipped.amplitudes()(1) - cplx(1, 0)) < 1e-15);
}

TEST_CASE("apply_operator is linear and matches the dense route") {
  Rng rng(5);
  int n = 3;
  StateVector psi = StateVector::random_haar(n, rng);
  PauliOperator a(n), b(n);
  for (int i = 0; i < 5; ++i) {
    a.add_term(PauliKey{rng.uniform_index(8), rng.uniform_index(8)},
               cplx(rng.normal(), rng.normal()));
    b.add_term(PauliKey{rng.uniform_index(8), rng.uniform_index(8)},
               cplx(rng.normal(), rng.normal()));
  }
  Eigen::VectorXcd lhs = apply_operator(psi, add(a, b));
  Eigen::VectorXcd rhs = apply_operator(psi, a) + apply_operator(psi, b);
  CHECK((lhs - rhs).norm() < 1e-12);
  CHECK((apply_operator(psi, a) - to_dense(a) * psi.amplitudes()).norm() < 1e-12);
  CHECK(apply_operator(psi, PauliOperator(n)).norm() == 0.0);
  CHECK((apply_operator(psi, PauliOperator::identity(n)) - psi.amplitudes())
            .norm() < 1e-15);
}

TEST_CASE("||E psi||^2 equals <psi|E^dag E|psi> densely at N=3") {
  Rng rng(7);
  int n = 3;
  StateVector psi = StateVector::random_haar(n, rng);
  PauliOperator e(n);
  for (int i = 0; i < 6; ++i)
    e.add_term(PauliKey{rng.uniform_index(8), rng.uniform_index(8)},
               cplx(rng.normal(), rng.normal()));
  double s = apply_operator(psi, e).squaredNorm();
  Eigen::MatrixXcd ed = to_dense(e);
  double want =
      (psi.amplitudes().adjoint() * ed.adjoint() * ed * psi.amplitudes())(0)
          .real();
  CHECK(s == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("norm preserved through long random gate sequences") {
  Rng rng(11);
  StateVector psi = StateVector::zero_state(4);
  for (int step = 0; step < 200; ++step) {
    int q = int(rng.uniform_index(4));
    psi = apply_1q(psi, random_haar_1q(rng), q);
    if (step % 3 == 0) {
      int q2 = (q + 1 + int(rng.uniform_index(3))) % 4;
      psi = apply_2q(psi, cnot(), q, q2);
    }
  }
  CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("reduced density matrices") {
  SUBCASE("product state marginal is pure") {
    DensityMatrix rho = reduced_density(StateVector::zero_state(2), {0});
    CHECK(std::abs(rho.mat(0, 0) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(rho.mat(1, 1)) < 1e-14);
    CHECK(rho.is_valid());
  }
  SUBCASE("Bell marginal is maximally mixed") {
    DensityMatrix rho = reduced_density(bell_pair(), {0});
    CHECK((rho.mat - Eigen::MatrixXcd::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
          1e-14);
  }
  SUBCASE("GHZ(3) single-qubit marginal has purity 1/2") {
    DensityMatrix rho = reduced_density(ghz(3), {1});
    double purity = (rho.mat * rho.mat).trace().real();
    CHECK(purity == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("empty subset rejected") {
    CHECK_THROWS_AS(reduced_density(ghz(3), {}), std::invalid_argument);
  }
}

TEST_CASE("Schmidt property: complementary marginals share spectra") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    StateVector psi = StateVector::random_haar(5, rng);
    DensityMatrix ra = reduced_density(psi, {0, 2});
    DensityMatrix rb = reduced_density(psi, {1, 3, 4});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(ra.mat,
                                                       Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(rb.mat,
                                                       Eigen::EigenvaluesOnly);
    // nonzero eigenvalues agree; ra is the smaller system
    Eigen::VectorXd va = ea.eigenvalues();
    Eigen::VectorXd vb = eb.eigenvalues().tail(va.size());
    for (Eigen::Index i = 0; i < va.size(); ++i)
      CHECK(va(i) == doctest::Approx(vb(i)).epsilon(1e-9));
  }
}

TEST_CASE("entanglement entropy values") {
  CHECK(entanglement_entropy(StateVector::zero_state(3), {0, 1}) ==
        doctest::Approx(0.0));
  CHECK(entanglement_entropy(bell_pair(), {0}) == doctest::Approx(1.0));
  CHECK(entanglement_entropy(ghz(4), {0, 1}) == doctest::Approx(1.0));
  Rng rng(17);
  StateVector psi = StateVector::random_haar(4, rng);
  double s = entanglement_entropy(psi, {0, 1});
  CHECK(s >= 0.0);
  CHECK(s <= 2.0);
}

TEST_CASE("random_haar_1q is unitary and averages like a design") {
  Rng rng(19);
  Eigen::Matrix2cd mean_x = Eigen::Matrix2cd::Zero();
  Eigen::Matrix4cd mean_xx = Eigen::Matrix4cd::Zero();
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  const int n_draws = 100000;
  for (int i = 0; i < n_draws; ++i) {
    Eigen::Matrix2cd u = random_haar_1q(rng);
    if (i < 100)
      CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    mean_x += u * x * u.adjoint();
    Eigen::Matrix4cd uu;
    for (int r1 = 0; r1 < 2; ++r1)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int r2 = 0; r2 < 2; ++r2)
          for (int c2 = 0; c2 < 2; ++c2)
            uu(2 * r1 + r2, 2 * c1 + c2) = u(r1, c1) * u(r2, c2);
    Eigen::Matrix4cd xx;
    for (int r1 = 0; r1 < 2; ++r1)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int r2 = 0; r2 < 2; ++r2)
          for (int c2 = 0; c2 < 2; ++c2)
            xx(2 * r1 + r2, 2 * c1 + c2) = x(r1, c1) * x(r2, c2);
    mean_xx += uu * xx * uu.adjoint();
  }
  mean_x /= n_draws;
  mean_xx /= n_draws;
  // 1-design: E[U X U^dag] = 0 within Monte Carlo error
  CHECK(mean_x.cwiseAbs().maxCoeff() < 3.0 / std::sqrt(double(n_draws)));
  // 2-design: E[U^x2 (X x X) U^dag^x2] = (2F - I)/3
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
  Eigen::Matrix4cd want = (2.0 * swap - Eigen::Matrix4cd::Identity()) / 3.0;
  CHECK((mean_xx - want).cwiseAbs().maxCoeff() <
        5.0 / std::sqrt(double(n_draws)));
}

TEST_CASE("binary and JSON serialization round trips") {
  Rng rng(23);
  StateVector psi = StateVector::random_haar(4, rng);
  std::string path =
      (std::filesystem::temp_directory_path() / "trotkit_sv_test.bin").string();
  save_statevector(path, psi);
  StateVector back = load_statevector(path);
  CHECK(back.n_qubits() == 4);
  CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
  std::filesystem::remove(path);

  std::string j = statevector_to_json(psi);
  CHECK(j.find("\"n_qubits\":4") != std::string::npos);
  CHECK_THROWS_AS(statevector_to_json(StateVector::zero_state(7)),
                  std::invalid_argument);
}
