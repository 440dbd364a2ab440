#include "trotkit/trotter.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace trotkit {

ProductFormula ProductFormula::pf1(int n_groups) {
  ProductFormula pf{1, {}};
  for (int l = 0; l < n_groups; ++l) pf.stages.push_back({l, 1.0});
  return pf;
}

ProductFormula ProductFormula::pf2(int n_groups) {
  ProductFormula pf{2, {}};
  for (int l = 0; l < n_groups; ++l) pf.stages.push_back({l, 0.5});
  for (int l = n_groups - 1; l >= 0; --l) pf.stages.push_back({l, 0.5});
  return pf;
}

void ProductFormula::validate(int n_groups) const {
  std::vector<double> sums(n_groups, 0.0);
  for (const auto& s : stages) {
    if (s.group < 0 || s.group >= n_groups)
      throw std::invalid_argument("ProductFormula: stage group out of range");
    sums[s.group] += s.coeff;
  }
  for (double v : sums)
    if (std::abs(v - 1.0) > 1e-12)
      throw std::invalid_argument("ProductFormula: group coefficients do not sum to 1");
}

ProductFormula suzuki_recursion(int order, int n_groups) {
  if (order == 2) return ProductFormula::pf2(n_groups);
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("suzuki_recursion: order must be even and >= 2");
  ProductFormula inner = suzuki_recursion(order - 2, n_groups);
  int k = order / 2;
  double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
  ProductFormula pf{order, {}};
  auto append_scaled = [&pf, &inner](double factor) {
    for (const auto& s : inner.stages)
      pf.stages.push_back({s.group, s.coeff * factor});
  };
  append_scaled(u);
  append_scaled(u);
  append_scaled(1.0 - 4.0 * u);
  append_scaled(u);
  append_scaled(u);
  return pf;
}

StateVector pf_step(const StateVector& psi, const HamiltonianSpec& h,
                    const ProductFormula& pf, double dt) {
  if (psi.n_qubits() != h.n_qubits)
    throw std::invalid_argument("pf_step: mismatched qubit counts");
  StateVector out = psi;
  // stage list is in operator order; the rightmost factor acts first
  for (auto it = pf.stages.rbegin(); it != pf.stages.rend(); ++it) {
    const PauliOperator& group = h.partition.at(it->group);
    for (const auto& [k, c] : group.terms()) {
      if (std::abs(c.imag()) > 1e-12)
        throw std::invalid_argument("pf_step: non-Hermitian group term");
      double theta = it->coeff * dt * c.real();
      PauliString p(h.n_qubits, k.x, k.z, 0);
      StateVector pw = apply_pauli(out, p);
      out.amplitudes() = std::cos(theta) * out.amplitudes() -
                         cplx(0, 1) * std::sin(theta) * pw.amplitudes();
    }
  }
  return out;
}

PauliOperator leading_error_pf1(const HamiltonianSpec& h,
                                ErrorConvention convention) {
  if (h.partition.size() != 2)
    throw std::invalid_argument("leading_error_pf1: partition must have 2 groups");
  PauliOperator e = commutator(h.partition[0], h.partition[1]);
  if (convention == ErrorConvention::kHalfCommutator) e = scale(e, 0.5);
  return e;
}

namespace {

// operator-valued polynomial in dt, truncated at fixed degree
using Series = std::vector<PauliOperator>;

Series series_identity(int n, int deg) {
  Series s(deg + 1, PauliOperator(n));
  s[0] = PauliOperator::identity(n);
  return s;
}

Series series_mul(const Series& a, const Series& b) {
  int deg = static_cast<int>(a.size()) - 1;
  Series out(deg + 1, PauliOperator(a[0].n_qubits()));
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j)
      out[i + j] = add(out[i + j], op_mul(a[i], b[j]));
  return out;
}

// exp(-i c dt H) truncated
Series series_exp(const PauliOperator& h, double c, int deg) {
  Series out(deg + 1, PauliOperator(h.n_qubits()));
  PauliOperator power = PauliOperator::identity(h.n_qubits());
  cplx factor = 1.0;
  out[0] = power;
  for (int k = 1; k <= deg; ++k) {
    power = op_mul(power, h);
    factor *= cplx(0, -c) / static_cast<double>(k);
    out[k] = scale(power, factor);
  }
  return out;
}

}  // namespace

PauliOperator leading_error(const HamiltonianSpec& h, const ProductFormula& pf) {
  pf.validate(static_cast<int>(h.partition.size()));
  int deg = pf.order + 1;
  Series u0 = series_exp(h.total, 1.0, deg);
  Series up = series_identity(h.n_qubits, deg);
  for (const auto& stage : pf.stages)
    up = series_mul(up, series_exp(h.partition.at(stage.group), stage.coeff, deg));
  // orders below p+1 must cancel
  for (int k = 0; k < deg; ++k) {
    PauliOperator diff = sub(u0[k], up[k]);
    diff.prune(1e-9);
    if (!diff.is_zero())
      throw std::logic_error("leading_error: low-order mismatch in expansion");
  }
  PauliOperator e = sub(u0[deg], up[deg]);
  return e.prune(1e-12);
}

std::vector<PauliOperator> qimf_error_terms(const HamiltonianSpec& h,
                                            ErrorConvention convention) {
  if (h.name != "qimf")
    throw std::invalid_argument("qimf_error_terms: spec is not the QIMF model");
  int n = h.n_qubits;
  const PauliOperator& a = h.partition[0];
  const PauliOperator& b = h.partition[1];
  double hx = a.coeff(PauliKey{1, 0}).real();
  double J = n >= 2 ? a.coeff(PauliKey{3, 0}).real() : 0.0;
  double hy = b.coeff(PauliKey{1, 1}).real();
  double f = convention == ErrorConvention::kHalfCommutator ? 0.5 : 1.0;
  std::vector<PauliOperator> terms;
  terms.reserve(n);
  for (int j = 0; j < n; ++j) {
    PauliOperator ej(n);
    ej.add_term(PauliKey{0, 1ull << j}, cplx(0, 2.0 * hx * hy * f));  // 2i hx hy Z_j
    if (j + 1 < n) {
      std::uint64_t bj = 1ull << j, bk = 1ull << (j + 1);
      ej.add_term(PauliKey{bk, bj}, cplx(0, 2.0 * J * hy * f));  // Z_j X_{j+1}
      ej.add_term(PauliKey{bj, bk}, cplx(0, 2.0 * J * hy * f));  // X_j Z_{j+1}
    }
    terms.push_back(ej.prune());
  }
  return terms;
}

std::vector<PauliOperator> decompose_by_leading_qubit(const PauliOperator& e) {
  std::map<int, PauliOperator> by_site;
  for (const auto& [k, c] : e.terms()) {
    std::uint64_t m = k.x | k.z;
    int site = m ? std::countr_zero(m) : 0;
    auto it = by_site.find(site);
    if (it == by_site.end())
      it = by_site.emplace(site, PauliOperator(e.n_qubits())).first;
    it->second.add_term(k, c);
  }
  std::vector<PauliOperator> out;
  for (auto& [site, op] : by_site) out.push_back(std::move(op));
  return out;
}

double s_E(const StateVector& psi, const PauliOperator& e) {
  return apply_operator(psi, e).squaredNorm();
}

double true_error_one_step(const StateVector& psi, const HamiltonianSpec& h,
                           const ProductFormula& pf, double dt,
                           const ExactEvolver& evolver) {
  StateVector exact = evolver.evolve(psi, dt);
  StateVector approx = pf_step(psi, h, pf, dt);
  return (exact.amplitudes() - approx.amplitudes()).norm();
}

double true_error_long(const StateVector& psi, const HamiltonianSpec& h,
                       const ProductFormula& pf, double dt, int r,
                       const ExactEvolver& evolver) {
  StateVector exact = evolver.evolve(psi, dt * r);
  StateVector approx = psi;
  for (int k = 0; k < r; ++k) approx = pf_step(approx, h, pf, dt);
  return (exact.amplitudes() - approx.amplitudes()).norm();
}

}  // namespace trotkit
