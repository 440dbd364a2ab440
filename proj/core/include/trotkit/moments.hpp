#pragma once

#include <string>
#include <vector>

#include "trotkit/hamiltonian.hpp"
#include "trotkit/pauli.hpp"
#include "trotkit/statevector.hpp"
#include "trotkit/trotter.hpp"

namespace trotkit {

/// traceless Hermitian pair operator
/// E_{jj'} = (E_{j'}^dag E_j + E_j^dag E_{j'} - trace part) / (1 + delta_{jj'})
PauliOperator error_pair_operator(const PauliOperator& ej,
                                  const PauliOperator& ejp);

struct PairRecord {
  int j, jp;
  std::vector<int> support;
  double a_jjp;          // 2 Tr(|E_jj'| |E^dag E|) / d over matched words
  double entropy_bits;   // S(rho_jj') in bits
  double trace_distance; // Tr|rho_jj' - I/d_jj'|
  double td_term;        // a_jj' * trace_distance
  double entropy_term;   // a_jj' * sqrt(2 log2 d_jj' - 2 S)
};

struct VarianceBoundReport {
  std::vector<PairRecord> pairs;
  double trace_distance_bound = 0;
  double entropy_bound = 0;
  double exact_variance = 0;

  std::string to_json() const;
};

/// Exact variance of s_E over the local-unitary orbit of psi0, from the
/// Pauli decomposition of E^dag E: each nonidentity word with coefficient b
/// and support w contributes b^2 3^{-|w|} sum_R <R>^2 over the 3^{|w|}
/// words R supported on exactly w.
double exact_variance_lu(const StateVector& psi0, const PauliOperator& edag_e);

/// Both variance bounds (trace-distance and entropy form) for the error
/// decomposition E = sum_j E_j, together with the exact variance.
VarianceBoundReport variance_bound(const StateVector& psi0,
                                   const std::vector<PauliOperator>& error_terms);

struct HaarMoments {
  double m1, m2, m3;
};

/// first three moments of s_E over the Haar (equivalently Clifford) orbit
HaarMoments haar_moments(const PauliOperator& edag_e);

/// B = Tr[Pi_sym4 (E^dag E)^{x4}] via the five-term trace expansion,
/// computed from sparse Pauli traces
double compute_B(const PauliOperator& edag_e);

/// A = Tr[Pi_sym4 (E^dag E)^{x4} Q] with Q = d^{-2} sum_P P^{x4}, computed
/// symbolically by Pauli character sums; O(m^3) in the term count of E^dag E.
/// The budget caps m^3 against runaway inputs.
double compute_A(const PauliOperator& edag_e,
                 std::size_t term_budget = 10000000000ull);

/// brute-force oracle: sums the five dense traces over all 4^N words
double compute_A_dense(const PauliOperator& edag_e, int limit = 3);

/// m4(M) = [24d(B-A) + 6(1-M)((d^2+3d)A - 4B)] / [d(d^2-1)(d+2)(d+4)]
double fourth_moment(double a_val, double b_val, double magic_value, double d);

struct KurtosisLaw {
  double alpha, beta;
  double a_val, b_val;
  double m1, m2, m3;
  double d;

  double predicted_kurtosis(double magic_value) const {
    return alpha + beta * magic_value;
  }
};

/// Kur(M) = alpha + beta M over the global-Clifford orbit; throws on a
/// degenerate distribution (m2 == m1^2)
KurtosisLaw kurtosis_law(const PauliOperator& edag_e);

/// sum_P Tr(O P O P) over all 4^N words; equals d Tr(O)^2
cplx sum_pauli_conjugation(const Eigen::MatrixXcd& o, int n_qubits);

/// Chebyshev tail bound Pr[|X - mu| >= k sigma] <= 1/k^2
double chebyshev_bound(double k);

/// one-sided tail bound from the third and fourth standardized moments,
/// valid for t > (k3 + sqrt(k3^2 + 4))/2 and k4 > k3^2 + 1
double zelen_bound(double kappa3, double kappa4, double t);

struct LongTimeBoundReport {
  std::vector<double> per_step_bounds;  // entropy-form bound for E U_p^k
  double variance_bound = 0;            // r dt^{2p+2} sum_k sqrt(B_k)/sqrt(2)
};

/// Evaluates the long-time variance bound by conjugating the error terms
/// through U_p^k densely and re-deriving supports and pair coefficients at
/// each step. Restricted to small N where the dense route is tractable.
LongTimeBoundReport long_time_variance_bound(
    const StateVector& psi0, const std::vector<PauliOperator>& error_terms,
    const HamiltonianSpec& h, const ProductFormula& pf, double dt, int r,
    int dense_limit = 6);

}  // namespace trotkit
