#pragma once

#include <string>
#include <vector>

#include "trotkit/clifford.hpp"
#include "trotkit/rng.hpp"
#include "trotkit/statevector.hpp"

namespace trotkit {

inline constexpr int kSpectrumQubitLimit = 12;

/// all 4^N squared Pauli expectations |<psi|P|psi>|^2, indexed by
/// (x_mask << N) | z_mask
struct PauliSpectrum {
  int n_qubits;
  std::vector<double> values;

  double at(std::uint64_t x_mask, std::uint64_t z_mask) const {
    return values[(x_mask << n_qubits) | z_mask];
  }
  double sum() const;
};

/// fast path: for each x_mask a Walsh-Hadamard transform over the
/// overlap vector conj(psi_r) psi_{r^x}; O(4^N N) total
PauliSpectrum pauli_spectrum(const StateVector& psi,
                             int limit = kSpectrumQubitLimit);

/// oracle path: one O(2^N) expectation per Pauli word
PauliSpectrum pauli_spectrum_naive(const StateVector& psi, int limit = 8);

/// P_alpha = (1/d) sum_P |<P>|^{2 alpha}, alpha >= 1
double stabilizer_purity(const StateVector& psi, double alpha,
                         int limit = kSpectrumQubitLimit);

/// linear 2-stabilizer entropy M = 1 - P_2; zero exactly on stabilizer
/// states and invariant under Clifford unitaries
double magic(const StateVector& psi, int limit = kSpectrumQubitLimit);

struct MagicLadderState {
  int k;
  StateVector state;
  double magic_value;
};

/// |psi_k> = C2 (T^{x k} tensor I) C1 |0...0> for fresh random Cliffords
/// C1, C2, with the realized magic computed numerically
std::vector<MagicLadderState> magic_ladder_states(int n_qubits,
                                                  const std::vector<int>& k_list,
                                                  Rng& rng);

void save_spectrum(const std::string& path, const PauliSpectrum& spec);

}  // namespace trotkit
