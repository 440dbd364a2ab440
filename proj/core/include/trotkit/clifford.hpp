#pragma once

#include <string>
#include <vector>

#include "trotkit/pauli.hpp"
#include "trotkit/rng.hpp"
#include "trotkit/statevector.hpp"

namespace trotkit {

struct CliffordGate {
  enum class Kind { H, S, CNOT, X, Z };
  Kind kind;
  int q0;
  int q1 = -1;  // CNOT target

  std::string str() const;
};

/// conjugation P -> g P g^dag with exact sign tracking
PauliString conjugate_by_gate(const PauliString& p, const CliffordGate& g);

/// Symplectic/stabilizer representation of an N-qubit Clifford unitary
/// modulo global phase: the images of the generators X_i and Z_i, each a
/// signed Hermitian Pauli word.
class CliffordTableau {
 public:
  explicit CliffordTableau(int n_qubits);  // identity

  int n_qubits() const { return n_; }
  const PauliString& x_image(int i) const { return x_img_[i]; }
  const PauliString& z_image(int i) const { return z_img_[i]; }
  PauliString& x_image(int i) { return x_img_[i]; }
  PauliString& z_image(int i) { return z_img_[i]; }

  /// rows satisfy the generator commutation relations and carry real signs
  bool is_valid() const;

  /// image of an arbitrary Pauli word under conjugation
  PauliString conjugate(const PauliString& p) const;

  /// append a gate to the represented circuit (rows are conjugated)
  void append_gate(const CliffordGate& g);

  bool operator==(const CliffordTableau& o) const;

  /// dedup/hash key: row masks and signs
  std::string key() const;

  std::string to_json() const;
  static CliffordTableau from_json(const std::string& text);

 private:
  int n_;
  std::vector<PauliString> x_img_, z_img_;
};

/// tableau distributed uniformly over the Clifford group modulo phase
CliffordTableau sample_uniform_clifford(int n_qubits, Rng& rng);

/// gate sequence over {H, S, CNOT, X, Z} whose conjugation action on every
/// generator reproduces the tableau exactly
std::vector<CliffordGate> synthesize(const CliffordTableau& tab);

StateVector apply_gate(const StateVector& psi, const CliffordGate& g);
StateVector apply_gates(const StateVector& psi,
                        const std::vector<CliffordGate>& gates);
StateVector apply_clifford(const StateVector& psi, const CliffordTableau& tab);

struct Clifford1q {
  CliffordTableau tableau;
  Eigen::Matrix2cd unitary;
};

/// the 24 single-qubit Cliffords modulo phase, deduplicated by tableau;
/// index order is fixed (BFS from identity over H then S)
const std::vector<Clifford1q>& enumerate_1q_cliffords();

/// full group closure by tableau (11520 elements at N=2); guarded to N <= 2
std::vector<CliffordTableau> enumerate_cliffords(int n_qubits);

/// n independent uniform draws from the 24-element group, as indices into
/// enumerate_1q_cliffords()
std::vector<int> sample_local_cliffords(int n_qubits, Rng& rng);

StateVector apply_local_cliffords(const StateVector& psi,
                                  const std::vector<int>& indices);

}  // namespace trotkit
