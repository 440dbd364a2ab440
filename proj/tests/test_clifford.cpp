#include "doctest.h"

#include <map>
#include <set>

#include "trotkit/clifford.hpp"
#include "trotkit/resources.hpp"

using namespace trotkit;

namespace {

// conjugation replay: every generator image must match the tableau exactly
bool replay_matches(const CliffordTableau& tab,
                    const std::vector<CliffordGate>& gates) {
  int n = tab.n_qubits();
  for (int q = 0; q < n; ++q) {
    PauliString x(n, 1ull << q, 0, 0);
    PauliString z(n, 0, 1ull << q, 0);
    for (const auto& g : gates) {
      x = conjugate_by_gate(x, g);
      z = conjugate_by_gate(z, g);
    }
    if (!(x == tab.x_image(q))) return false;
    if (!(z == tab.z_image(q))) return false;
  }
  return true;
}

Eigen::MatrixXcd gates_to_matrix(int n, const std::vector<CliffordGate>& gates) {
  std::uint64_t d = 1ull << n;
  Eigen::MatrixXcd u(d, d);
  for (std::uint64_t c = 0; c < d; ++c)
    u.col(c) = apply_gates(StateVector::basis_state(n, c), gates).amplitudes();
  return u;
}

}  // namespace

TEST_CASE("single-gate conjugation rules agree with dense conjugation") {
  std::vector<CliffordGate> gates = {
      {CliffordGate::Kind::H, 0},  {CliffordGate::Kind::S, 0},
      {CliffordGate::Kind::X, 1},  {CliffordGate::Kind::Z, 0},
      {CliffordGate::Kind::CNOT, 0, 1}, {CliffordGate::Kind::CNOT, 1, 0}};
  for (const auto& g : gates) {
    Eigen::MatrixXcd u = gates_to_matrix(2, {g});
    for (std::uint64_t x = 0; x < 4; ++x)
      for (std::uint64_t z = 0; z < 4; ++z)
        for (int pe : {0, 1, 2, 3}) {
          PauliString p(2, x, z, pe);
          PauliString q = conjugate_by_gate(p, g);
          Eigen::MatrixXcd want = u * p.to_dense() * u.adjoint();
          CHECK((q.to_dense() - want).cwiseAbs().maxCoeff() < 1e-13);
        }
  }
}

TEST_CASE("tableau conjugate of composite words matches row products") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    CliffordTableau tab = sample_uniform_clifford(3, rng);
    std::vector<CliffordGate> gates = synthesize(tab);
    Eigen::MatrixXcd u = gates_to_matrix(3, gates);
    for (int k = 0; k < 5; ++k) {
      PauliString p(3, rng.uniform_index(8), rng.uniform_index(8),
                    int(rng.uniform_index(4)));
      Eigen::MatrixXcd want = u * p.to_dense() * u.adjoint();
      CHECK((tab.conjugate(p).to_dense() - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("sampled tableaux satisfy the symplectic invariants") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    CliffordTableau tab = sample_uniform_clifford(1 + trial % 5, rng);
    CHECK(tab.is_valid());
  }
}

TEST_CASE("synthesis reproduces the tableau by conjugation replay") {
  SUBCASE("identity tableau") {
    CliffordTableau id(3);
    std::vector<CliffordGate> gates = synthesize(id);
    CHECK(replay_matches(id, gates));
  }
  SUBCASE("single Hadamard tableau") {
    CliffordTableau tab(2);
    tab.append_gate({CliffordGate::Kind::H, 0});
    std::vector<CliffordGate> gates = synthesize(tab);
    CHECK(replay_matches(tab, gates));
    // acts as X <-> Z on qubit 0
    CHECK(tab.x_image(0) == PauliString(2, 0, 1, 0));
  }
  SUBCASE("random tableaux at N=1..4") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      int n = 1 + int(rng.uniform_index(4));
      CliffordTableau tab = sample_uniform_clifford(n, rng);
      CHECK(replay_matches(tab, synthesize(tab)));
    }
  }
}

TEST_CASE("apply_clifford is unitary and respects the tableau action") {
  Rng rng(13);
  CliffordTableau tab = sample_uniform_clifford(3, rng);
  StateVector psi = StateVector::random_haar(3, rng);
  StateVector out = apply_clifford(psi, tab);
  CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
  // identity tableau acts as the identity up to global phase
  StateVector out_id = apply_clifford(psi, CliffordTableau(3));
  cplx overlap = psi.inner(out_id);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
}

TEST_CASE("|<P>| spectrum of C psi is a permutation of that of psi") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 3;
    StateVector psi = StateVector::random_haar(n, rng);
    CliffordTableau tab = sample_uniform_clifford(n, rng);
    StateVector cpsi = apply_clifford(psi, tab);
    std::vector<double> a = pauli_spectrum(psi).values;
    std::vector<double> b = pauli_spectrum(cpsi).values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }
}

TEST_CASE("the 24 single-qubit Cliffords") {
  const auto& table = enumerate_1q_cliffords();
  CHECK(table.size() == 24);
  SUBCASE("unitaries are distinct modulo phase and tableau-consistent") {
    for (const auto& c : table) {
      CHECK((c.unitary.adjoint() * c.unitary - Eigen::Matrix2cd::Identity())
                .norm() < 1e-12);
      for (std::uint64_t x = 0; x < 2; ++x)
        for (std::uint64_t z = 0; z < 2; ++z) {
          if (!x && !z) continue;
          PauliString p(1, x, z, 0);
          Eigen::MatrixXcd want = c.unitary * p.to_dense() * c.unitary.adjoint();
          CHECK((c.tableau.conjugate(p).to_dense() - want).cwiseAbs().maxCoeff() <
                1e-12);
        }
    }
  }
  SUBCASE("closure under composition modulo phase") {
    std::set<std::string> keys;
    for (const auto& c : table) keys.insert(c.tableau.key());
    for (const auto& a : table)
      for (const auto& b : table) {
        // compose tableaux by conjugating a's rows through b
        CliffordTableau ab = a.tableau;
        std::vector<CliffordGate> bg = synthesize(b.tableau);
        for (const auto& g : bg) {
          CliffordTableau step = ab;
          ab.append_gate(g);
          (void)step;
        }
        CHECK(keys.count(ab.key()) == 1);
      }
  }
}

TEST_CASE("N=2 Clifford group closure has order 11520") {
  std::vector<CliffordTableau> group = enumerate_cliffords(2);
  CHECK(group.size() == 11520);
  std::set<std::string> keys;
  for (const auto& t : group) keys.insert(t.key());
  CHECK(keys.size() == 11520);
  CHECK_THROWS_AS(enumerate_cliffords(3), std::invalid_argument);
}

TEST_CASE("uniform sampling at N=1: chi-square over the 24 elements") {
  const auto& table = enumerate_1q_cliffords();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < table.size(); ++i)
    index[table[i].tableau.key()] = int(i);
  Rng rng(97);
  const int draws = 100000;
  std::vector<int> counts(24, 0);
  for (int i = 0; i < draws; ++i) {
    CliffordTableau tab = sample_uniform_clifford(1, rng);
    auto it = index.find(tab.key());
    REQUIRE(it != index.end());
    counts[it->second]++;
  }
  double expected = double(draws) / 24.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square(23) 0.999 quantile; p > 0.001 requires staying below it
  CHECK(chi2 < 49.728);
}

TEST_CASE("uniform sampling at N=2: chi-square against the 11520 group") {
  std::vector<CliffordTableau> group = enumerate_cliffords(2);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < group.size(); ++i) index[group[i].key()] = int(i);
  Rng rng(101);
  const int draws = 115200;  // 10 per element on average
  std::vector<int> counts(group.size(), 0);
  for (int i = 0; i < draws; ++i) {
    auto it = index.find(sample_uniform_clifford(2, rng).key());
    REQUIRE(it != index.end());
    counts[it->second]++;
  }
  double expected = double(draws) / double(group.size());
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square with 11519 dof: mean 11519, sd ~ sqrt(2*11519) ~ 151.8;
  // 4.5 siga ~ one-in-several-million false alarm
  CHECK(chi2 < 11519 + 4.5 * 151.8);
}

TEST_CASE("local Clifford draws: marginals uniform, resources preserved") {
  Rng rng(31);
  const auto& table = enumerate_1q_cliffords();
  const int draws = 24000;
  std::vector<int> counts(24, 0);
  for (int i = 0; i < draws; ++i) {
    std::vector<int> idx = sample_local_cliffords(4, rng);
    REQUIRE(idx.size() == 4);
    counts[idx[0]]++;
  }
  double expected = draws / 24.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 49.728);

  StateVector psi = StateVector::random_haar(4, rng);
  std::vector<int> idx = sample_local_cliffords(4, rng);
  StateVector out = apply_local_cliffords(psi, idx);
  CHECK(std::abs(entanglement_entropy(out, {0, 1}) -
                 entanglement_entropy(psi, {0, 1})) < 1e-10);
  CHECK(std::abs(magic(out) - magic(psi)) < 1e-10);
  CHECK((apply_local_cliffords(psi, {}).amplitudes() - psi.amplitudes()).norm() ==
        0.0);
  (void)table;
}

TEST_CASE("magic invariance under global Cliffords") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng.uniform_index(3));
    StateVector psi = StateVector::random_haar(n, rng);
    CliffordTableau tab = sample_uniform_clifford(n, rng);
    CHECK(std::abs(magic(apply_clifford(psi, tab)) - magic(psi)) < 1e-10);
  }
}

TEST_CASE("tableau JSON round trip") {
  Rng rng(41);
  CliffordTableau tab = sample_uniform_clifford(3, rng);
  CliffordTableau back = CliffordTableau::from_json(tab.to_json());
  CHECK(tab == back);
}
