#include "trotkit/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace trotkit {

namespace {

// amplitude bit position of a qubit index
inline int bitpos(int n, int q) { return n - 1 - q; }

inline std::uint64_t amp_mask(std::uint64_t qubit_mask, int n) {
  std::uint64_t r = 0;
  for (int q = 0; q < n; ++q)
    if ((qubit_mask >> q) & 1) r |= 1ull << (n - 1 - q);
  return r;
}

void check_qubit(int n, int q) {
  if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
}

template <int D>
void check_unitary(const Eigen::Matrix<cplx, D, D>& g) {
  double err = (g.adjoint() * g - Eigen::Matrix<cplx, D, D>::Identity()).norm();
  if (err > 1e-10) throw std::invalid_argument("gate is not unitary");
}

}  // namespace

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_(n_qubits), amp_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > 30)
    throw std::invalid_argument("StateVector: bad qubit count");
  if (amp_.size() != static_cast<Eigen::Index>(1ull << n_qubits))
    throw std::invalid_argument("StateVector: amplitude size != 2^N");
}

StateVector StateVector::zero_state(int n_qubits) {
  return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1ull << n_qubits);
  v(index) = 1.0;
  return StateVector(n_qubits, std::move(v));
}

StateVector StateVector::random_haar(int n_qubits, Rng& rng) {
  Eigen::VectorXcd v(1ull << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = cplx(rng.normal(), rng.normal());
  v /= v.norm();
  return StateVector(n_qubits, std::move(v));
}

StateVector& StateVector::normalize() {
  amp_ /= amp_.norm();
  return *this;
}

cplx StateVector::inner(const StateVector& other) const {
  if (n_ != other.n_)
    throw std::invalid_argument("inner: mismatched qubit counts");
  return amp_.dot(other.amp_);  // Eigen dot conjugates the left argument
}

StateVector apply_1q(const StateVector& psi, const Eigen::Matrix2cd& gate,
                     int qubit) {
  check_qubit(psi.n_qubits(), qubit);
  check_unitary<2>(gate);
  std::uint64_t stride = 1ull << bitpos(psi.n_qubits(), qubit);
  std::uint64_t d = psi.dim();
  Eigen::VectorXcd out = psi.amplitudes();
  for (std::uint64_t base = 0; base < d; base += 2 * stride) {
    for (std::uint64_t i = base; i < base + stride; ++i) {
      cplx a0 = out(i), a1 = out(i + stride);
      out(i) = gate(0, 0) * a0 + gate(0, 1) * a1;
      out(i + stride) = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
  }
  return StateVector(psi.n_qubits(), std::move(out));
}

StateVector apply_2q(const StateVector& psi, const Eigen::Matrix4cd& gate,
                     int qubit_a, int qubit_b) {
  check_qubit(psi.n_qubits(), qubit_a);
  check_qubit(psi.n_qubits(), qubit_b);
  if (qubit_a == qubit_b)
    throw std::invalid_argument("apply_2q: qubits must differ");
  check_unitary<4>(gate);
  std::uint64_t sa = 1ull << bitpos(psi.n_qubits(), qubit_a);
  std::uint64_t sb = 1ull << bitpos(psi.n_qubits(), qubit_b);
  std::uint64_t d = psi.dim();
  Eigen::VectorXcd out = psi.amplitudes();
  for (std::uint64_t i = 0; i < d; ++i) {
    if ((i & sa) || (i & sb)) continue;
    std::uint64_t idx[4] = {i, i | sb, i | sa, i | sa | sb};
    cplx v[4] = {out(idx[0]), out(idx[1]), out(idx[2]), out(idx[3])};
    for (int r = 0; r < 4; ++r)
      out(idx[r]) = gate(r, 0) * v[0] + gate(r, 1) * v[1] + gate(r, 2) * v[2] +
                    gate(r, 3) * v[3];
  }
  return StateVector(psi.n_qubits(), std::move(out));
}

StateVector apply_pauli(const StateVector& psi, const PauliString& s) {
  if (s.n_qubits() != psi.n_qubits())
    throw std::invalid_argument("apply_pauli: mismatched qubit counts");
  int n = psi.n_qubits();
  std::uint64_t d = psi.dim();
  std::uint64_t ax = amp_mask(s.x_mask(), n), az = amp_mask(s.z_mask(), n);
  int pe = (s.phase_exp() + std::popcount(s.x_mask() & s.z_mask())) % 4;
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx pre = kIPow[pe];
  const Eigen::VectorXcd& in = psi.amplitudes();
  Eigen::VectorXcd out(d);
  for (std::uint64_t r = 0; r < d; ++r) {
    double sgn = (std::popcount(az & r) & 1) ? -1.0 : 1.0;
    out(r ^ ax) = pre * sgn * in(r);
  }
  return StateVector(n, std::move(out));
}

Eigen::VectorXcd apply_operator(const StateVector& psi,
                                const PauliOperator& a) {
  if (a.n_qubits() != psi.n_qubits())
    throw std::invalid_argument("apply_operator: mismatched qubit counts");
  int n = psi.n_qubits();
  std::uint64_t d = psi.dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Eigen::VectorXcd& in = psi.amplitudes();
  for (const auto& [k, c] : a.terms()) {
    std::uint64_t ax = amp_mask(k.x, n), az = amp_mask(k.z, n);
    cplx pre = c * kIPow[std::popcount(k.x & k.z) % 4];
    for (std::uint64_t r = 0; r < d; ++r) {
      double sgn = (std::popcount(az & r) & 1) ? -1.0 : 1.0;
      out(r ^ ax) += pre * sgn * in(r);
    }
  }
  return out;
}

cplx expectation(const StateVector& psi, const PauliOperator& a) {
  return psi.amplitudes().dot(apply_operator(psi, a));
}

cplx expectation(const StateVector& psi, const PauliString& s) {
  return psi.amplitudes().dot(apply_pauli(psi, s).amplitudes());
}

bool DensityMatrix::is_valid(double tol) const {
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(mat.trace() - cplx(1, 0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > -tol;
}

DensityMatrix reduced_density(const StateVector& psi,
                              const std::vector<int>& subset) {
  if (subset.empty())
    throw std::invalid_argument("reduced_density: empty subset");
  int n = psi.n_qubits();
  std::vector<int> qs = subset;
  std::sort(qs.begin(), qs.end());
  if (std::unique(qs.begin(), qs.end()) != qs.end())
    throw std::invalid_argument("reduced_density: duplicate qubits");
  for (int q : qs) check_qubit(n, q);

  int k = static_cast<int>(qs.size());
  int ne = n - k;
  // scatter tables: subsystem bits (first listed qubit most significant)
  // and environment bits into full amplitude indices
  std::vector<std::uint64_t> spos(k);
  std::uint64_t submask = 0;
  for (int j = 0; j < k; ++j) {
    spos[j] = 1ull << bitpos(n, qs[j]);
    submask |= spos[j];
  }
  std::vector<std::uint64_t> epos;
  for (int b = n - 1; b >= 0; --b) {
    std::uint64_t bit = 1ull << b;
    if (!(submask & bit)) epos.push_back(bit);
  }
  auto scatter = [](std::uint64_t bits, const std::vector<std::uint64_t>& pos) {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
      if ((bits >> (pos.size() - 1 - j)) & 1) r |= pos[j];
    return r;
  };

  std::uint64_t ds = 1ull << k, de = 1ull << ne;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(ds, ds);
  Eigen::VectorXcd col(ds);
  const Eigen::VectorXcd& amp = psi.amplitudes();
  std::vector<std::uint64_t> sidx(ds);
  for (std::uint64_t s = 0; s < ds; ++s) {
    std::uint64_t r = 0;
    for (int j = 0; j < k; ++j)
      if ((s >> (k - 1 - j)) & 1) r |= spos[j];
    sidx[s] = r;
  }
  for (std::uint64_t e = 0; e < de; ++e) {
    std::uint64_t ebits = scatter(e, epos);
    for (std::uint64_t s = 0; s < ds; ++s) col(s) = amp(sidx[s] | ebits);
    rho.noalias() += col * col.adjoint();
  }
  return DensityMatrix{std::move(rho)};
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.mat,
                                                     Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = std::min(1.0, std::max(0.0, es.eigenvalues()(i)));
    if (lam < 1e-12) continue;
    s -= lam * std::log2(lam);
  }
  return s;
}

double entanglement_entropy(const StateVector& psi,
                            const std::vector<int>& subset) {
  return von_neumann_entropy_bits(reduced_density(psi, subset));
}

Eigen::Matrix2cd random_haar_1q(Rng& rng) {
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
  // Gram-Schmidt QR with positive R diagonal is Haar on U(2)
  Eigen::Vector2cd c0 = g.col(0) / g.col(0).norm();
  Eigen::Vector2cd c1 = g.col(1) - c0 * (c0.adjoint() * g.col(1))(0);
  c1 /= c1.norm();
  Eigen::Matrix2cd u;
  u.col(0) = c0;
  u.col(1) = c1;
  return u;
}

void save_statevector(const std::string& path, const StateVector& psi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_statevector: cannot open " + path);
  std::uint64_t n = static_cast<std::uint64_t>(psi.n_qubits());
  f.write(reinterpret_cast<const char*>(&n), 8);
  for (std::uint64_t i = 0; i < psi.dim(); ++i) {
    double re = psi.amplitudes()(i).real(), im = psi.amplitudes()(i).imag();
    f.write(reinterpret_cast<const char*>(&re), 8);
    f.write(reinterpret_cast<const char*>(&im), 8);
  }
}

StateVector load_statevector(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_statevector: cannot open " + path);
  std::uint64_t n = 0;
  f.read(reinterpret_cast<char*>(&n), 8);
  if (!f || n < 1 || n > 30)
    throw std::runtime_error("load_statevector: bad header");
  Eigen::VectorXcd v(1ull << n);
  for (std::uint64_t i = 0; i < (1ull << n); ++i) {
    double re = 0, im = 0;
    f.read(reinterpret_cast<char*>(&re), 8);
    f.read(reinterpret_cast<char*>(&im), 8);
    if (!f) throw std::runtime_error("load_statevector: truncated file");
    v(i) = cplx(re, im);
  }
  return StateVector(static_cast<int>(n), std::move(v));
}

std::string statevector_to_json(const StateVector& psi) {
  if (psi.n_qubits() > 6)
    throw std::invalid_argument("statevector_to_json: limited to N <= 6");
  nlohmann::json j;
  j["n_qubits"] = psi.n_qubits();
  nlohmann::json amps = nlohmann::json::array();
  for (std::uint64_t i = 0; i < psi.dim(); ++i)
    amps.push_back({{"re", psi.amplitudes()(i).real()},
                    {"im", psi.amplitudes()(i).imag()}});
  j["amplitudes"] = amps;
  return j.dump();
}

}  // namespace trotkit
