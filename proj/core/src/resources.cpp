#include "trotkit/resources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace trotkit {

namespace {

inline std::uint64_t amp_mask(std::uint64_t qubit_mask, int n) {
  std::uint64_t r = 0;
  for (int q = 0; q < n; ++q)
    if ((qubit_mask >> q) & 1) r |= 1ull << (n - 1 - q);
  return r;
}

void walsh_hadamard(std::vector<cplx>& v) {
  std::size_t d = v.size();
  for (std::size_t h = 1; h < d; h <<= 1)
    for (std::size_t i = 0; i < d; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        cplx a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

// visit |<P(x,z)>|^2 for every z at fixed x; f(z_mask, value)
template <typename F>
void for_each_z(const StateVector& psi, std::uint64_t qx, std::vector<cplx>& buf,
                F&& f) {
  int n = psi.n_qubits();
  std::uint64_t d = psi.dim();
  std::uint64_t ax = amp_mask(qx, n);
  const Eigen::VectorXcd& a = psi.amplitudes();
  for (std::uint64_t r = 0; r < d; ++r)
    buf[r] = std::conj(a(r ^ ax)) * a(r);
  walsh_hadamard(buf);
  // <P(x,z)> = i^{|x&z|} * buf[amp(z)]; the phase drops in magnitude
  for (std::uint64_t qz = 0; qz < d; ++qz) f(qz, std::norm(buf[amp_mask(qz, n)]));
}

}  // namespace

double PauliSpectrum::sum() const {
  double s = 0;
  for (double v : values) s += v;
  return s;
}

PauliSpectrum pauli_spectrum(const StateVector& psi, int limit) {
  int n = psi.n_qubits();
  if (n > limit)
    throw std::invalid_argument("pauli_spectrum: spectrum limit exceeded");
  PauliSpectrum out{n, std::vector<double>(1ull << (2 * n))};
  std::vector<cplx> buf(psi.dim());
  for (std::uint64_t qx = 0; qx < (1ull << n); ++qx)
    for_each_z(psi, qx, buf, [&](std::uint64_t qz, double v) {
      out.values[(qx << n) | qz] = v;
    });
  return out;
}

PauliSpectrum pauli_spectrum_naive(const StateVector& psi, int limit) {
  int n = psi.n_qubits();
  if (n > limit)
    throw std::invalid_argument("pauli_spectrum_naive: limit exceeded");
  PauliSpectrum out{n, std::vector<double>(1ull << (2 * n))};
  for (std::uint64_t qx = 0; qx < (1ull << n); ++qx)
    for (std::uint64_t qz = 0; qz < (1ull << n); ++qz) {
      PauliString p(n, qx, qz, 0);
      out.values[(qx << n) | qz] = std::norm(expectation(psi, p));
    }
  return out;
}

double stabilizer_purity(const StateVector& psi, double alpha, int limit) {
  if (alpha < 1.0)
    throw std::invalid_argument("stabilizer_purity: alpha must be >= 1");
  int n = psi.n_qubits();
  if (n > limit)
    throw std::invalid_argument("stabilizer_purity: spectrum limit exceeded");
  double d = static_cast<double>(psi.dim());
  double acc = 0;
  std::vector<cplx> buf(psi.dim());
  for (std::uint64_t qx = 0; qx < (1ull << n); ++qx)
    for_each_z(psi, qx, buf,
               [&](std::uint64_t, double v) { acc += std::pow(v, alpha); });
  return std::min(1.0, acc / d);
}

double magic(const StateVector& psi, int limit) {
  int n = psi.n_qubits();
  if (n > limit) throw std::invalid_argument("magic: spectrum limit exceeded");
  double d = static_cast<double>(psi.dim());
  double acc = 0;
  std::vector<cplx> buf(psi.dim());
  for (std::uint64_t qx = 0; qx < (1ull << n); ++qx)
    for_each_z(psi, qx, buf, [&](std::uint64_t, double v) { acc += v * v; });
  return std::max(0.0, 1.0 - acc / d);
}

std::vector<MagicLadderState> magic_ladder_states(int n_qubits,
                                                  const std::vector<int>& k_list,
                                                  Rng& rng) {
  for (int k : k_list)
    if (k < 0 || k > n_qubits)
      throw std::invalid_argument("magic_ladder_states: k out of range");
  Eigen::Matrix2cd tgate;
  tgate << 1, 0, 0, std::exp(cplx(0, 0.78539816339744830961));  // pi/4
  std::vector<MagicLadderState> out;
  for (int k : k_list) {
    CliffordTableau c1 = sample_uniform_clifford(n_qubits, rng);
    CliffordTableau c2 = sample_uniform_clifford(n_qubits, rng);
    StateVector psi = apply_clifford(StateVector::zero_state(n_qubits), c1);
    for (int q = 0; q < k; ++q) psi = apply_1q(psi, tgate, q);
    psi = apply_clifford(psi, c2);
    double m = magic(psi);
    out.push_back({k, std::move(psi), m});
  }
  return out;
}

void save_spectrum(const std::string& path, const PauliSpectrum& spec) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_spectrum: cannot open " + path);
  std::uint64_t n = static_cast<std::uint64_t>(spec.n_qubits);
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(spec.values.data()),
          static_cast<std::streamsize>(spec.values.size() * sizeof(double)));
}

}  // namespace trotkit
