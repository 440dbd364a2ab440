#include "trotkit/clifford.hpp"

#include <bit>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace trotkit {

namespace {

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

struct MaskPair {
  std::uint64_t x = 0, z = 0;
};

inline int symp_form(const MaskPair& a, const MaskPair& b) {
  return parity(a.x & b.z) ^ parity(a.z & b.x);
}

}  // namespace

std::string CliffordGate::str() const {
  switch (kind) {
    case Kind::H: return "H(" + std::to_string(q0) + ")";
    case Kind::S: return "S(" + std::to_string(q0) + ")";
    case Kind::X: return "X(" + std::to_string(q0) + ")";
    case Kind::Z: return "Z(" + std::to_string(q0) + ")";
    case Kind::CNOT:
      return "CNOT(" + std::to_string(q0) + "," + std::to_string(q1) + ")";
  }
  return "?";
}

PauliString conjugate_by_gate(const PauliString& p, const CliffordGate& g) {
  std::uint64_t x = p.x_mask(), z = p.z_mask();
  int phase = p.phase_exp();
  std::uint64_t b0 = 1ull << g.q0;
  switch (g.kind) {
    case CliffordGate::Kind::H: {
      bool xb = x & b0, zb = z & b0;
      if (xb && zb) phase += 2;  // Y -> -Y
      x = xb ? (zb ? x : (x ^ b0)) : (zb ? (x | b0) : x);
      z = zb ? (xb ? z : (z ^ b0)) : (xb ? (z | b0) : z);
      break;
    }
    case CliffordGate::Kind::S: {
      bool xb = x & b0, zb = z & b0;
      if (xb && zb) phase += 2;  // Y -> -X
      if (xb) z ^= b0;           // X -> Y, Y -> X
      break;
    }
    case CliffordGate::Kind::X:
      if (z & b0) phase += 2;
      break;
    case CliffordGate::Kind::Z:
      if (x & b0) phase += 2;
      break;
    case CliffordGate::Kind::CNOT: {
      std::uint64_t b1 = 1ull << g.q1;
      bool xc = x & b0, zc = z & b0, xt = x & b1, zt = z & b1;
      if (xc && zt && (xt == zc)) phase += 2;
      if (xc) x ^= b1;
      if (zt) z ^= b0;
      break;
    }
  }
  return PauliString(p.n_qubits(), x, z, phase);
}

CliffordTableau::CliffordTableau(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 63)
    throw std::invalid_argument("CliffordTableau: bad qubit count");
  for (int q = 0; q < n_; ++q) {
    x_img_.emplace_back(n_, 1ull << q, 0, 0);
    z_img_.emplace_back(n_, 0, 1ull << q, 0);
  }
}

bool CliffordTableau::is_valid() const {
  for (int i = 0; i < n_; ++i) {
    if (x_img_[i].phase_exp() % 2 || z_img_[i].phase_exp() % 2) return false;
    if (commutes(x_img_[i], z_img_[i])) return false;
    for (int j = i + 1; j < n_; ++j) {
      if (!commutes(x_img_[i], x_img_[j])) return false;
      if (!commutes(z_img_[i], z_img_[j])) return false;
      if (!commutes(x_img_[i], z_img_[j])) return false;
      if (!commutes(z_img_[i], x_img_[j])) return false;
    }
  }
  return true;
}

PauliString CliffordTableau::conjugate(const PauliString& p) const {
  if (p.n_qubits() != n_)
    throw std::invalid_argument("conjugate: mismatched qubit counts");
  // P(x,z) = i^{|x&z|} prod_q X_q^{x_q} prod_q Z_q^{z_q}
  PauliString acc(n_, 0, 0,
                  (p.phase_exp() + std::popcount(p.x_mask() & p.z_mask())) % 4);
  for (int q = 0; q < n_; ++q)
    if ((p.x_mask() >> q) & 1) acc = acc * x_img_[q];
  for (int q = 0; q < n_; ++q)
    if ((p.z_mask() >> q) & 1) acc = acc * z_img_[q];
  return acc;
}

void CliffordTableau::append_gate(const CliffordGate& g) {
  for (int i = 0; i < n_; ++i) {
    x_img_[i] = conjugate_by_gate(x_img_[i], g);
    z_img_[i] = conjugate_by_gate(z_img_[i], g);
  }
}

bool CliffordTableau::operator==(const CliffordTableau& o) const {
  return n_ == o.n_ && x_img_ == o.x_img_ && z_img_ == o.z_img_;
}

std::string CliffordTableau::key() const {
  std::string k;
  k.reserve(static_cast<std::size_t>(n_) * 34);
  auto put = [&k](const PauliString& s) {
    for (int b = 0; b < 8; ++b) k.push_back(char((s.x_mask() >> (8 * b)) & 0xff));
    for (int b = 0; b < 8; ++b) k.push_back(char((s.z_mask() >> (8 * b)) & 0xff));
    k.push_back(char(s.phase_exp()));
  };
  for (int i = 0; i < n_; ++i) {
    put(x_img_[i]);
    put(z_img_[i]);
  }
  return k;
}

CliffordTableau sample_uniform_clifford(int n_qubits, Rng& rng) {
  // hyperbolic-pair construction: draw the image of X_i uniformly from the
  // nonzero vectors of the symplectic complement of the previous pairs, and
  // the image of Z_i uniformly from the partners with form 1; sign bits
  // uniform. The choice counts match |Sp(2n,2)| * 4^n exactly.
  std::vector<MaskPair> basis;
  for (int q = 0; q < n_qubits; ++q) {
    basis.push_back({1ull << q, 0});
    basis.push_back({0, 1ull << q});
  }
  auto random_combo = [&](const std::vector<MaskPair>& bs) {
    MaskPair v;
    for (const auto& b : bs)
      if (rng.bernoulli()) {
        v.x ^= b.x;
        v.z ^= b.z;
      }
    return v;
  };

  CliffordTableau tab(n_qubits);
  for (int i = 0; i < n_qubits; ++i) {
    MaskPair u;
    do {
      u = random_combo(basis);
    } while (u.x == 0 && u.z == 0);
    // some basis vector pairs nontrivially with u (form nondegenerate)
    MaskPair pivot{};
    bool found = false;
    for (const auto& b : basis)
      if (symp_form(u, b)) {
        pivot = b;
        found = true;
        break;
      }
    if (!found) throw std::logic_error("degenerate symplectic subspace");
    MaskPair w = random_combo(basis);
    if (!symp_form(u, w)) {
      w.x ^= pivot.x;
      w.z ^= pivot.z;
    }
    tab.x_image(i) = PauliString(n_qubits, u.x, u.z, rng.bernoulli() ? 2 : 0);
    tab.z_image(i) = PauliString(n_qubits, w.x, w.z, rng.bernoulli() ? 2 : 0);

    // restrict the basis to the symplectic complement of (u, w):
    // project out the pair components, then keep an independent set
    // via a GF(2) xor basis keyed on leading bit
    auto lead = [](const MaskPair& v) {
      return v.x ? 64 + (63 - std::countl_zero(v.x))
                 : 63 - std::countl_zero(v.z);
    };
    std::vector<MaskPair> by_lead(128);
    std::vector<MaskPair> reduced;
    for (auto b : basis) {
      if (symp_form(b, w)) {
        b.x ^= u.x;
        b.z ^= u.z;
      }
      if (symp_form(b, u)) {
        b.x ^= w.x;
        b.z ^= w.z;
      }
      while (b.x || b.z) {
        int l = lead(b);
        if (!(by_lead[l].x || by_lead[l].z)) {
          by_lead[l] = b;
          reduced.push_back(b);
          break;
        }
        b.x ^= by_lead[l].x;
        b.z ^= by_lead[l].z;
      }
    }
    if (reduced.size() != basis.size() - 2)
      throw std::logic_error("symplectic complement has wrong dimension");
    basis = std::move(reduced);
  }
  return tab;
}

namespace {

// reduce a working tableau to the identity, collecting the applied gates
struct Reducer {
  CliffordTableau w;
  std::vector<CliffordGate> applied;

  explicit Reducer(const CliffordTableau& t) : w(t) {}

  void apply(CliffordGate g) {
    w.append_gate(g);
    applied.push_back(g);
  }
  void h(int q) { apply({CliffordGate::Kind::H, q}); }
  void s(int q) { apply({CliffordGate::Kind::S, q}); }
  void cnot(int c, int t) { apply({CliffordGate::Kind::CNOT, c, t}); }

  // clear `row` (fetched via get()) down to the word `target` on qubit i,
  // using only gates that act on qubits >= i and preserve Z_i when
  // z_locked is set
  template <typename Get>
  void clear_row_to_x(int i, Get get, bool z_locked) {
    int n = w.n_qubits();
    if ((get().x_mask() & ~((1ull << i) - 1)) == 0) {
      // no X component on qubits >= i: make one with H
      // (cannot happen in the z_locked pass, where the X_i bit is forced)
      (void)z_locked;
      for (int q = i; q < n; ++q)
        if ((get().z_mask() >> q) & 1) {
          h(q);
          break;
        }
    }
    if (!((get().x_mask() >> i) & 1)) {
      int j = -1;
      for (int q = i + 1; q < n; ++q)
        if ((get().x_mask() >> q) & 1) {
          j = q;
          break;
        }
      if (j < 0) throw std::logic_error("synthesize: invalid tableau");
      cnot(i, j);
      cnot(j, i);
      cnot(i, j);
    }
    for (int q = i + 1; q < n; ++q)
      if ((get().x_mask() >> q) & 1) cnot(i, q);
    if ((get().z_mask() >> i) & 1) s(i);  // Y_i -> X_i
    for (int q = i + 1; q < n; ++q)
      if ((get().z_mask() >> q) & 1) {
        h(q);
        cnot(i, q);
      }
  }
};

}  // namespace

std::vector<CliffordGate> synthesize(const CliffordTableau& tab) {
  if (!tab.is_valid())
    throw std::invalid_argument("synthesize: invalid tableau");
  int n = tab.n_qubits();
  Reducer red(tab);
  for (int i = 0; i < n; ++i) {
    red.clear_row_to_x(i, [&]() -> const PauliString& { return red.w.x_image(i); },
                       false);
    red.h(i);  // X row now holds Z_i; fix the Z row against that lock
    red.clear_row_to_x(i, [&]() -> const PauliString& { return red.w.z_image(i); },
                       true);
    red.h(i);
  }
  for (int i = 0; i < n; ++i) {
    if (red.w.x_image(i).phase_exp() == 2) red.apply({CliffordGate::Kind::Z, i});
    if (red.w.z_image(i).phase_exp() == 2) red.apply({CliffordGate::Kind::X, i});
  }
  if (!(red.w == CliffordTableau(n)))
    throw std::logic_error("synthesize: reduction failed");

  // the represented unitary is the inverse of the applied reduction
  std::vector<CliffordGate> out;
  for (auto it = red.applied.rbegin(); it != red.applied.rend(); ++it) {
    if (it->kind == CliffordGate::Kind::S) {
      out.push_back(*it);  // S^dag = SSS
      out.push_back(*it);
      out.push_back(*it);
    } else {
      out.push_back(*it);  // H, X, Z, CNOT are involutions
    }
  }
  return out;
}

namespace {

Eigen::Matrix2cd gate_matrix_1q(const CliffordGate& g) {
  Eigen::Matrix2cd m;
  const double s = 0.70710678118654752440;
  switch (g.kind) {
    case CliffordGate::Kind::H: m << s, s, s, -s; break;
    case CliffordGate::Kind::S: m << 1, 0, 0, cplx(0, 1); break;
    case CliffordGate::Kind::X: m << 0, 1, 1, 0; break;
    case CliffordGate::Kind::Z: m << 1, 0, 0, -1; break;
    default: throw std::logic_error("not a 1q gate");
  }
  return m;
}

}  // namespace

StateVector apply_gate(const StateVector& psi, const CliffordGate& g) {
  if (g.kind == CliffordGate::Kind::CNOT) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return apply_2q(psi, m, g.q0, g.q1);
  }
  return apply_1q(psi, gate_matrix_1q(g), g.q0);
}

StateVector apply_gates(const StateVector& psi,
                        const std::vector<CliffordGate>& gates) {
  StateVector out = psi;
  for (const auto& g : gates) out = apply_gate(out, g);
  return out;
}

StateVector apply_clifford(const StateVector& psi, const CliffordTableau& tab) {
  if (tab.n_qubits() != psi.n_qubits())
    throw std::invalid_argument("apply_clifford: mismatched qubit counts");
  return apply_gates(psi, synthesize(tab));
}

const std::vector<Clifford1q>& enumerate_1q_cliffords() {
  static const std::vector<Clifford1q> table = [] {
    std::vector<Clifford1q> out;
    std::unordered_set<std::string> seen;
    std::vector<Clifford1q> frontier;
    frontier.push_back({CliffordTableau(1), Eigen::Matrix2cd::Identity()});
    seen.insert(frontier[0].tableau.key());
    out.push_back(frontier[0]);
    const CliffordGate hg{CliffordGate::Kind::H, 0};
    const CliffordGate sg{CliffordGate::Kind::S, 0};
    while (!frontier.empty()) {
      std::vector<Clifford1q> next;
      for (const auto& c : frontier) {
        for (const auto& g : {hg, sg}) {
          Clifford1q nc{c.tableau, gate_matrix_1q(g) * c.unitary};
          nc.tableau.append_gate(g);
          if (seen.insert(nc.tableau.key()).second) {
            out.push_back(nc);
            next.push_back(nc);
          }
        }
      }
      frontier = std::move(next);
    }
    if (out.size() != 24)
      throw std::logic_error("single-qubit Clifford enumeration != 24");
    return out;
  }();
  return table;
}

std::vector<CliffordTableau> enumerate_cliffords(int n_qubits) {
  if (n_qubits > 2)
    throw std::invalid_argument("enumerate_cliffords: limited to N <= 2");
  std::vector<CliffordGate> gens;
  for (int q = 0; q < n_qubits; ++q) {
    gens.push_back({CliffordGate::Kind::H, q});
    gens.push_back({CliffordGate::Kind::S, q});
  }
  for (int a = 0; a < n_qubits; ++a)
    for (int b = 0; b < n_qubits; ++b)
      if (a != b) gens.push_back({CliffordGate::Kind::CNOT, a, b});

  std::vector<CliffordTableau> out;
  std::unordered_set<std::string> seen;
  out.emplace_back(n_qubits);
  seen.insert(out[0].key());
  for (std::size_t head = 0; head < out.size(); ++head) {
    CliffordTableau cur = out[head];
    for (const auto& g : gens) {
      CliffordTableau nxt = cur;
      nxt.append_gate(g);
      if (seen.insert(nxt.key()).second) out.push_back(nxt);
    }
  }
  return out;
}

std::vector<int> sample_local_cliffords(int n_qubits, Rng& rng) {
  std::vector<int> idx(n_qubits);
  for (int q = 0; q < n_qubits; ++q)
    idx[q] = static_cast<int>(rng.uniform_index(24));
  return idx;
}

StateVector apply_local_cliffords(const StateVector& psi,
                                  const std::vector<int>& indices) {
  const auto& table = enumerate_1q_cliffords();
  StateVector out = psi;
  for (std::size_t q = 0; q < indices.size(); ++q)
    out = apply_1q(out, table[indices[q]].unitary, static_cast<int>(q));
  return out;
}

std::string CliffordTableau::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_;
  nlohmann::json rows = nlohmann::json::array();
  auto put = [&rows, this](const PauliString& s, const std::string& name) {
    std::string xb, zb;
    for (int q = 0; q < n_; ++q) {
      xb.push_back(((s.x_mask() >> q) & 1) ? '1' : '0');
      zb.push_back(((s.z_mask() >> q) & 1) ? '1' : '0');
    }
    rows.push_back({{"row", name},
                    {"x", xb},
                    {"z", zb},
                    {"sign", s.phase_exp() == 2 ? -1 : 1}});
  };
  for (int i = 0; i < n_; ++i) put(x_img_[i], "X" + std::to_string(i));
  for (int i = 0; i < n_; ++i) put(z_img_[i], "Z" + std::to_string(i));
  j["rows"] = rows;
  return j.dump();
}

CliffordTableau CliffordTableau::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int n = j.at("n_qubits").get<int>();
  CliffordTableau tab(n);
  for (const auto& r : j.at("rows")) {
    std::string name = r.at("row").get<std::string>();
    std::string xb = r.at("x").get<std::string>();
    std::string zb = r.at("z").get<std::string>();
    int sign = r.at("sign").get<int>();
    std::uint64_t x = 0, z = 0;
    for (int q = 0; q < n; ++q) {
      if (xb.at(q) == '1') x |= 1ull << q;
      if (zb.at(q) == '1') z |= 1ull << q;
    }
    PauliString s(n, x, z, sign < 0 ? 2 : 0);
    int idx = std::stoi(name.substr(1));
    if (name[0] == 'X')
      tab.x_image(idx) = s;
    else
      tab.z_image(idx) = s;
  }
  if (!tab.is_valid())
    throw std::invalid_argument("CliffordTableau::from_json: invalid tableau");
  return tab;
}

}  // namespace trotkit
