#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trotkit/pauli.hpp"
#include "trotkit/statevector.hpp"

namespace trotkit {

/// Hamiltonian together with its product-formula partition H = sum_l H_l.
/// Every group is Hermitian and internally commuting, so each stage
/// exponential factors exactly over its terms.
struct HamiltonianSpec {
  int n_qubits;
  PauliOperator total;
  std::vector<PauliOperator> partition;
  std::string name;

  std::size_t group_count() const { return partition.size(); }

  /// partition sums to total, groups Hermitian and internally commuting
  void validate(double tol = 1e-12) const;
};

/// 1D mixed-field Ising chain, open boundary:
/// hx sum X_j + hy sum Y_j + J sum X_j X_{j+1}.
/// Partition [A, B] with A = X plus XX terms and B = Y terms.
HamiltonianSpec qimf(int n_qubits, double h_x, double h_y, double J);

/// 1D Heisenberg chain with X field, open boundary:
/// h sum X_j + J sum (XX + YY + ZZ).
/// Partition [h X + J XX, J YY, J ZZ], each internally commuting.
HamiltonianSpec heisenberg(int n_qubits, double h, double J);

/// cached eigendecomposition of dense(H.total) for exact evolution
class ExactEvolver {
 public:
  explicit ExactEvolver(const HamiltonianSpec& h,
                        int dense_limit = kDenseQubitLimit);

  int n_qubits() const { return n_; }

  /// e^{-iHt}
  Eigen::MatrixXcd evolution_operator(double t) const;

  StateVector evolve(const StateVector& psi, double t) const;

 private:
  int n_;
  Eigen::MatrixXcd vecs_;
  Eigen::VectorXd vals_;
};

inline Eigen::MatrixXcd exact_evolution_operator(const HamiltonianSpec& h,
                                                 double t,
                                                 int dense_limit = kDenseQubitLimit) {
  return ExactEvolver(h, dense_limit).evolution_operator(t);
}

inline StateVector evolve(const StateVector& psi, const HamiltonianSpec& h,
                          double t) {
  return ExactEvolver(h).evolve(psi, t);
}

}  // namespace trotkit
