#include "trotkit/hamiltonian.hpp"

#include <stdexcept>

namespace trotkit {

void HamiltonianSpec::validate(double tol) const {
  PauliOperator sum(n_qubits);
  for (const auto& g : partition) {
    if (g.n_qubits() != n_qubits)
      throw std::invalid_argument("HamiltonianSpec: group qubit mismatch");
    if (!g.is_hermitian(tol))
      throw std::invalid_argument("HamiltonianSpec: non-Hermitian group");
    // pairwise commuting terms within the group
    std::vector<PauliKey> keys;
    for (const auto& [k, c] : g.terms()) keys.push_back(k);
    for (std::size_t a = 0; a < keys.size(); ++a)
      for (std::size_t b = a + 1; b < keys.size(); ++b) {
        PauliString pa(n_qubits, keys[a].x, keys[a].z, 0);
        PauliString pb(n_qubits, keys[b].x, keys[b].z, 0);
        if (!commutes(pa, pb))
          throw std::invalid_argument(
              "HamiltonianSpec: non-commuting terms inside a group");
      }
    sum = add(sum, g);
  }
  PauliOperator diff = sub(sum, total);
  for (const auto& [k, c] : diff.terms())
    if (std::abs(c) > tol)
      throw std::invalid_argument("HamiltonianSpec: partition does not sum to total");
}

HamiltonianSpec qimf(int n_qubits, double h_x, double h_y, double J) {
  if (n_qubits < 2) throw std::invalid_argument("qimf: need n >= 2");
  PauliOperator a(n_qubits), b(n_qubits);
  for (int j = 0; j < n_qubits; ++j) {
    a.add_term(PauliKey{1ull << j, 0}, h_x);                     // X_j
    b.add_term(PauliKey{1ull << j, 1ull << j}, h_y);             // Y_j
  }
  for (int j = 0; j + 1 < n_qubits; ++j)
    a.add_term(PauliKey{(1ull << j) | (1ull << (j + 1)), 0}, J);  // X_j X_{j+1}
  a.prune();
  b.prune();
  HamiltonianSpec spec{n_qubits, add(a, b), {a, b}, "qimf"};
  return spec;
}

HamiltonianSpec heisenberg(int n_qubits, double h, double J) {
  if (n_qubits < 2) throw std::invalid_argument("heisenberg: need n >= 2");
  PauliOperator gx(n_qubits), gyy(n_qubits), gzz(n_qubits);
  for (int j = 0; j < n_qubits; ++j)
    gx.add_term(PauliKey{1ull << j, 0}, h);
  for (int j = 0; j + 1 < n_qubits; ++j) {
    std::uint64_t bond = (1ull << j) | (1ull << (j + 1));
    gx.add_term(PauliKey{bond, 0}, J);      // XX
    gyy.add_term(PauliKey{bond, bond}, J);  // YY
    gzz.add_term(PauliKey{0, bond}, J);     // ZZ
  }
  gx.prune();
  gyy.prune();
  gzz.prune();
  PauliOperator total = add(add(gx, gyy), gzz);
  HamiltonianSpec spec{n_qubits, total, {gx, gyy, gzz}, "heisenberg"};
  return spec;
}

ExactEvolver::ExactEvolver(const HamiltonianSpec& h, int dense_limit)
    : n_(h.n_qubits) {
  if (n_ > dense_limit)
    throw std::invalid_argument("ExactEvolver: dense limit exceeded");
  Eigen::MatrixXcd hm = to_dense(h.total, dense_limit);
  double herm_err = (hm - hm.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > 1e-12)
    throw std::invalid_argument("ExactEvolver: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
  vecs_ = es.eigenvectors();
  vals_ = es.eigenvalues();
}

Eigen::MatrixXcd ExactEvolver::evolution_operator(double t) const {
  Eigen::VectorXcd ph(vals_.size());
  for (Eigen::Index i = 0; i < vals_.size(); ++i)
    ph(i) = std::exp(cplx(0, -vals_(i) * t));
  return vecs_ * ph.asDiagonal() * vecs_.adjoint();
}

StateVector ExactEvolver::evolve(const StateVector& psi, double t) const {
  if (psi.n_qubits() != n_)
    throw std::invalid_argument("evolve: mismatched qubit counts");
  Eigen::VectorXcd c = vecs_.adjoint() * psi.amplitudes();
  for (Eigen::Index i = 0; i < vals_.size(); ++i)
    c(i) *= std::exp(cplx(0, -vals_(i) * t));
  return StateVector(n_, vecs_ * c);
}

}  // namespace trotkit
