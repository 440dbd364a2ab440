#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace trotkit {

using cplx = std::complex<double>;

inline constexpr double kCoeffPruneTol = 1e-14;
inline constexpr int kDenseQubitLimit = 12;

/// N-qubit Pauli word stored as X/Z bit masks (bit q = qubit q) plus a
/// power-of-i prefactor. The mask pair (x, z) names the Hermitian word
/// built from per-qubit letters (x=1,z=1 is Y, not XZ), so phase_exp 0
/// and 2 are the Hermitian strings +P and -P.
class PauliString {
 public:
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_exp = 0);

  static PauliString from_text(const std::string& text);

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exp() const { return phase_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  bool is_hermitian() const { return phase_ % 2 == 0; }
  double sign() const { return phase_ == 0 ? 1.0 : (phase_ == 2 ? -1.0 : 0.0); }

  /// i^phase_exp as a complex number
  cplx phase() const;

  PauliString unsigned_word() const { return PauliString(n_, x_, z_, 0); }

  std::uint64_t support_mask() const { return x_ | z_; }
  std::vector<int> support() const;
  int weight() const;

  /// single-qubit letter at qubit q, one of 'I','X','Y','Z'
  char letter(int q) const;

  /// text form "[+|-][i]LLL...", qubit 0 leftmost
  std::string str() const;

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
  }

  /// dense matrix in the amplitude ordering of StateVector (qubit 0 = MSB)
  Eigen::MatrixXcd to_dense() const;

 private:
  int n_;
  std::uint64_t x_, z_;
  int phase_;  // mod 4
};

PauliString string_mul(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) {
  return string_mul(a, b);
}

/// true iff the symplectic form popcount(a.x & b.z) + popcount(a.z & b.x)
/// is even
bool commutes(const PauliString& a, const PauliString& b);

struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend auto operator<=>(const PauliKey&, const PauliKey&) = default;
};

/// Sparse weighted sum of Hermitian Pauli words. Keys are unsigned words in
/// canonical (x_mask, z_mask) order; any word phase is folded into the
/// complex coefficient. Coefficients below kCoeffPruneTol are dropped.
class PauliOperator {
 public:
  explicit PauliOperator(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 63)
      throw std::invalid_argument("PauliOperator: bad qubit count");
  }

  static PauliOperator zero(int n_qubits) { return PauliOperator(n_qubits); }
  static PauliOperator identity(int n_qubits, cplx c = 1.0);
  static PauliOperator from_string(const PauliString& s, cplx coeff = 1.0);

  int n_qubits() const { return n_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  const std::map<PauliKey, cplx>& terms() const { return terms_; }

  cplx coeff(const PauliKey& k) const;
  cplx coeff(const PauliString& s) const {
    return coeff(PauliKey{s.x_mask(), s.z_mask()});
  }

  void add_term(const PauliString& s, cplx coeff);
  void add_term(const PauliKey& k, cplx coeff);

  PauliOperator& prune(double tol = kCoeffPruneTol);

  bool is_hermitian(double tol = 1e-12) const;

  /// Tr(A)/d, i.e. the identity coefficient
  cplx normalized_trace() const;

  std::uint64_t support_mask() const;
  std::vector<int> support() const;

  std::string to_json() const;
  static PauliOperator from_json(const std::string& text);

 private:
  int n_;
  std::map<PauliKey, cplx> terms_;
};

PauliOperator add(const PauliOperator& a, const PauliOperator& b);
PauliOperator sub(const PauliOperator& a, const PauliOperator& b);
PauliOperator scale(const PauliOperator& a, cplx c);
PauliOperator dagger(const PauliOperator& a);
PauliOperator op_mul(const PauliOperator& a, const PauliOperator& b);

/// AB - BA; commuting word pairs are skipped outright
PauliOperator commutator(const PauliOperator& a, const PauliOperator& b);

/// sum of |c_P|^2 = Tr(A^dag A)/d
double frobenius_norm_sq(const PauliOperator& a);

/// replaces every coefficient by its absolute value
PauliOperator abs_envelope(const PauliOperator& a);

/// Tr(AB)/d via matched-key coefficient products
cplx normalized_trace_product(const PauliOperator& a, const PauliOperator& b);

Eigen::MatrixXcd to_dense(const PauliOperator& a,
                          int dense_limit = kDenseQubitLimit);

/// Pauli coefficients of a dense operator: c(x,z) = Tr(P(x,z) M) / d.
/// O(4^N log d) via per-x-mask Walsh-Hadamard transforms.
PauliOperator pauli_decompose(const Eigen::MatrixXcd& m, int n_qubits,
                              double prune_tol = kCoeffPruneTol);

inline PauliOperator operator+(const PauliOperator& a, const PauliOperator& b) {
  return add(a, b);
}
inline PauliOperator operator-(const PauliOperator& a, const PauliOperator& b) {
  return sub(a, b);
}
inline PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
  return op_mul(a, b);
}
inline PauliOperator operator*(cplx c, const PauliOperator& a) {
  return scale(a, c);
}

}  // namespace trotkit
