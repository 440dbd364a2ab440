#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trotkit/pauli.hpp"
#include "trotkit/rng.hpp"

namespace trotkit {

/// Dense complex amplitude vector over N qubits. Qubit 0 is the most
/// significant amplitude index bit, so |q0 q1 ... > reads off the index
/// in binary left to right.
class StateVector {
 public:
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

  static StateVector zero_state(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint64_t index);
  static StateVector random_haar(int n_qubits, Rng& rng);

  int n_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t(1) << n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }

  double norm_sq() const { return amp_.squaredNorm(); }
  StateVector& normalize();

  cplx inner(const StateVector& other) const;

 private:
  int n_;
  Eigen::VectorXcd amp_;
};

StateVector apply_1q(const StateVector& psi, const Eigen::Matrix2cd& gate,
                     int qubit);
StateVector apply_2q(const StateVector& psi, const Eigen::Matrix4cd& gate,
                     int qubit_a, int qubit_b);
StateVector apply_pauli(const StateVector& psi, const PauliString& s);

/// sum_P c_P (P|psi>); the result is in general unnormalized
Eigen::VectorXcd apply_operator(const StateVector& psi, const PauliOperator& a);

/// <psi|A|psi>
cplx expectation(const StateVector& psi, const PauliOperator& a);
cplx expectation(const StateVector& psi, const PauliString& s);

struct DensityMatrix {
  Eigen::MatrixXcd mat;

  std::uint64_t dim() const { return static_cast<std::uint64_t>(mat.rows()); }
  /// Hermitian within tol, trace 1 within tol, eigenvalues >= -tol
  bool is_valid(double tol = 1e-10) const;
};

/// partial trace over the complement of `subset` (qubit indices)
DensityMatrix reduced_density(const StateVector& psi,
                              const std::vector<int>& subset);

/// von Neumann entropy in bits; eigenvalues below 1e-12 contribute zero
double von_neumann_entropy_bits(const DensityMatrix& rho);
double entanglement_entropy(const StateVector& psi,
                            const std::vector<int>& subset);

/// Haar-distributed single-qubit unitary
Eigen::Matrix2cd random_haar_1q(Rng& rng);

void save_statevector(const std::string& path, const StateVector& psi);
StateVector load_statevector(const std::string& path);
std::string statevector_to_json(const StateVector& psi);

}  // namespace trotkit
