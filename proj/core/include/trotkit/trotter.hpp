#pragma once

#include <vector>

#include "trotkit/hamiltonian.hpp"
#include "trotkit/pauli.hpp"
#include "trotkit/statevector.hpp"

namespace trotkit {

/// Product formula as an ordered stage list. Stages are written in operator
/// order (index 0 is the leftmost exponential factor), so application to a
/// state runs the list back to front.
struct ProductFormula {
  int order;
  struct Stage {
    int group;
    double coeff;
  };
  std::vector<Stage> stages;

  static ProductFormula pf1(int n_groups);
  static ProductFormula pf2(int n_groups);

  /// stage coefficients for each group sum to 1
  void validate(int n_groups) const;
};

/// standard recursive Suzuki construction over the PF2 base,
/// u_k = 1/(4 - 4^{1/(2k-1)})
ProductFormula suzuki_recursion(int order, int n_groups);

inline ProductFormula product_formula(int order, int n_groups) {
  if (order == 1) return ProductFormula::pf1(n_groups);
  if (order == 2) return ProductFormula::pf2(n_groups);
  return suzuki_recursion(order, n_groups);
}

/// one product-formula step; each group stage is applied exactly by
/// exponentiating its mutually commuting Pauli terms
StateVector pf_step(const StateVector& psi, const HamiltonianSpec& h,
                    const ProductFormula& pf, double dt);

enum class ErrorConvention {
  kHalfCommutator,  // U0 - U1 = E dt^2 + O(dt^3), E = [A,B]/2
  kFullCommutator,  // E = [A,B] as printed in the model definition
};

/// leading PF1 error operator for a two-group partition
PauliOperator leading_error_pf1(
    const HamiltonianSpec& h,
    ErrorConvention convention = ErrorConvention::kHalfCommutator);

/// leading error operator of any stage list: the coefficient of dt^{p+1}
/// in the operator Taylor expansion of U0(dt) - Up(dt)
PauliOperator leading_error(const HamiltonianSpec& h, const ProductFormula& pf);

/// site-resolved PF1 error terms E_j for the QIMF chain; sums to
/// leading_error_pf1 under the same convention
std::vector<PauliOperator> qimf_error_terms(
    const HamiltonianSpec& h,
    ErrorConvention convention = ErrorConvention::kHalfCommutator);

/// generic decomposition of an error operator into local terms, grouping
/// words by their lowest support qubit
std::vector<PauliOperator> decompose_by_leading_qubit(const PauliOperator& e);

/// s_E(psi) = || E|psi> ||^2
double s_E(const StateVector& psi, const PauliOperator& e);

/// || (U0(dt) - Up(dt)) |psi> ||
double true_error_one_step(const StateVector& psi, const HamiltonianSpec& h,
                           const ProductFormula& pf, double dt,
                           const ExactEvolver& evolver);

/// || (Up(dt)^r - U0(r dt)) |psi> ||
double true_error_long(const StateVector& psi, const HamiltonianSpec& h,
                       const ProductFormula& pf, double dt, int r,
                       const ExactEvolver& evolver);

}  // namespace trotkit
