#include "trotkit/pauli.hpp"

#include <bit>
#include <cmath>

#include "json.hpp"

namespace trotkit {

namespace {

int popcount(std::uint64_t v) { return std::popcount(v); }

std::uint64_t check_mask(std::uint64_t m, int n, const char* what) {
  if (n < 1 || n > 63) throw std::invalid_argument("PauliString: bad qubit count");
  if (n < 64 && (m >> n) != 0)
    throw std::invalid_argument(std::string("PauliString: ") + what +
                                " has bits above qubit count");
  return m;
}

// amplitude-space mask: qubit 0 is the most significant index bit
std::uint64_t amp_mask(std::uint64_t qubit_mask, int n) {
  std::uint64_t r = 0;
  for (int q = 0; q < n; ++q)
    if ((qubit_mask >> q) & 1) r |= 1ull << (n - 1 - q);
  return r;
}

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

PauliString::PauliString(int n_qubits) : PauliString(n_qubits, 0, 0, 0) {}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask, int phase_exp)
    : n_(n_qubits),
      x_(check_mask(x_mask, n_qubits, "x_mask")),
      z_(check_mask(z_mask, n_qubits, "z_mask")),
      phase_(((phase_exp % 4) + 4) % 4) {}

cplx PauliString::phase() const { return kIPow[phase_]; }

std::vector<int> PauliString::support() const {
  std::vector<int> qs;
  std::uint64_t m = support_mask();
  for (int q = 0; q < n_; ++q)
    if ((m >> q) & 1) qs.push_back(q);
  return qs;
}

int PauliString::weight() const { return popcount(support_mask()); }

char PauliString::letter(int q) const {
  if (q < 0 || q >= n_) throw std::out_of_range("PauliString: qubit index");
  bool x = (x_ >> q) & 1, z = (z_ >> q) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::str() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string s = prefix[phase_];
  for (int q = 0; q < n_; ++q) s += letter(q);
  return s;
}

PauliString PauliString::from_text(const std::string& text) {
  std::size_t pos = 0;
  int phase = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = 1;
    ++pos;
  }
  if (neg) phase += 2;
  if (pos >= text.size())
    throw std::invalid_argument("PauliString::from_text: no letters");
  int n = static_cast<int>(text.size() - pos);
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (text[pos + q]) {
      case 'I': break;
      case 'X': x |= 1ull << q; break;
      case 'Y': x |= 1ull << q; z |= 1ull << q; break;
      case 'Z': z |= 1ull << q; break;
      default:
        throw std::invalid_argument("PauliString::from_text: bad letter");
    }
  }
  return PauliString(n, x, z, phase);
}

Eigen::MatrixXcd PauliString::to_dense() const {
  if (n_ > kDenseQubitLimit)
    throw std::invalid_argument("PauliString::to_dense: dense limit exceeded");
  std::uint64_t d = 1ull << n_;
  std::uint64_t ax = amp_mask(x_, n_), az = amp_mask(z_, n_);
  cplx pre = kIPow[(phase_ + popcount(x_ & z_)) % 4];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::uint64_t r = 0; r < d; ++r) {
    double sgn = (popcount(az & r) & 1) ? -1.0 : 1.0;
    m(r ^ ax, r) = pre * sgn;
  }
  return m;
}

PauliString string_mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("string_mul: mismatched qubit counts");
  std::uint64_t x = a.x_mask() ^ b.x_mask();
  std::uint64_t z = a.z_mask() ^ b.z_mask();
  // via the raw i^e X^x Z^z form: swapping Z^z1 past X^x2 costs (-1)^|z1&x2|
  int pe = a.phase_exp() + b.phase_exp();
  pe += popcount(a.x_mask() & a.z_mask()) + popcount(b.x_mask() & b.z_mask());
  pe += 2 * popcount(a.z_mask() & b.x_mask());
  pe += 4 - popcount(x & z) % 4;
  return PauliString(a.n_qubits(), x, z, pe);
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("commutes: mismatched qubit counts");
  int form = popcount(a.x_mask() & b.z_mask()) + popcount(a.z_mask() & b.x_mask());
  return (form & 1) == 0;
}

PauliOperator PauliOperator::identity(int n_qubits, cplx c) {
  PauliOperator a(n_qubits);
  a.add_term(PauliKey{0, 0}, c);
  return a;
}

PauliOperator PauliOperator::from_string(const PauliString& s, cplx coeff) {
  PauliOperator a(s.n_qubits());
  a.add_term(s, coeff);
  return a;
}

cplx PauliOperator::coeff(const PauliKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? cplx(0, 0) : it->second;
}

void PauliOperator::add_term(const PauliString& s, cplx coeff) {
  if (s.n_qubits() != n_)
    throw std::invalid_argument("PauliOperator: mismatched qubit counts");
  add_term(PauliKey{s.x_mask(), s.z_mask()}, coeff * s.phase());
}

void PauliOperator::add_term(const PauliKey& k, cplx coeff) {
  check_mask(k.x, n_, "x_mask");
  check_mask(k.z, n_, "z_mask");
  auto [it, inserted] = terms_.try_emplace(k, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) < kCoeffPruneTol) terms_.erase(it);
}

PauliOperator& PauliOperator::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < tol)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

bool PauliOperator::is_hermitian(double tol) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

cplx PauliOperator::normalized_trace() const { return coeff(PauliKey{0, 0}); }

std::uint64_t PauliOperator::support_mask() const {
  std::uint64_t m = 0;
  for (const auto& [k, c] : terms_) m |= k.x | k.z;
  return m;
}

std::vector<int> PauliOperator::support() const {
  std::vector<int> qs;
  std::uint64_t m = support_mask();
  for (int q = 0; q < n_; ++q)
    if ((m >> q) & 1) qs.push_back(q);
  return qs;
}

PauliOperator add(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("add: mismatched qubit counts");
  PauliOperator r = a;
  for (const auto& [k, c] : b.terms()) r.add_term(k, c);
  return r;
}

PauliOperator sub(const PauliOperator& a, const PauliOperator& b) {
  return add(a, scale(b, -1.0));
}

PauliOperator scale(const PauliOperator& a, cplx c) {
  PauliOperator r(a.n_qubits());
  if (std::abs(c) == 0.0) return r;
  for (const auto& [k, v] : a.terms()) r.add_term(k, v * c);
  return r;
}

PauliOperator dagger(const PauliOperator& a) {
  // basis words are Hermitian, so only coefficients conjugate
  PauliOperator r(a.n_qubits());
  for (const auto& [k, v] : a.terms()) r.add_term(k, std::conj(v));
  return r;
}

namespace {

// product of the Hermitian words P(k1) P(k2) = i^pe P(k1^k2)
inline int word_product_phase(const PauliKey& k1, const PauliKey& k2) {
  int pe = popcount(k1.x & k1.z) + popcount(k2.x & k2.z);
  pe += 2 * popcount(k1.z & k2.x);
  pe += 4 - popcount((k1.x ^ k2.x) & (k1.z ^ k2.z)) % 4;
  return pe % 4;
}

inline bool keys_commute(const PauliKey& a, const PauliKey& b) {
  return ((popcount(a.x & b.z) + popcount(a.z & b.x)) & 1) == 0;
}

}  // namespace

PauliOperator op_mul(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("op_mul: mismatched qubit counts");
  PauliOperator r(a.n_qubits());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      PauliKey k{ka.x ^ kb.x, ka.z ^ kb.z};
      r.add_term(k, ca * cb * kIPow[word_product_phase(ka, kb)]);
    }
  }
  return r.prune();
}

PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("commutator: mismatched qubit counts");
  // AB - BA = 2AB restricted to anticommuting word pairs
  PauliOperator r(a.n_qubits());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if (keys_commute(ka, kb)) continue;
      PauliKey k{ka.x ^ kb.x, ka.z ^ kb.z};
      r.add_term(k, 2.0 * ca * cb * kIPow[word_product_phase(ka, kb)]);
    }
  }
  return r.prune();
}

double frobenius_norm_sq(const PauliOperator& a) {
  double s = 0;
  for (const auto& [k, c] : a.terms()) s += std::norm(c);
  return s;
}

PauliOperator abs_envelope(const PauliOperator& a) {
  PauliOperator r(a.n_qubits());
  for (const auto& [k, c] : a.terms()) r.add_term(k, std::abs(c));
  return r;
}

cplx normalized_trace_product(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("normalized_trace_product: mismatched qubit counts");
  const auto& small = a.term_count() <= b.term_count() ? a : b;
  const auto& large = a.term_count() <= b.term_count() ? b : a;
  cplx s = 0;
  for (const auto& [k, c] : small.terms()) s += c * large.coeff(k);
  return s;
}

Eigen::MatrixXcd to_dense(const PauliOperator& a, int dense_limit) {
  if (a.n_qubits() > dense_limit)
    throw std::invalid_argument("to_dense: dense limit exceeded");
  int n = a.n_qubits();
  std::uint64_t d = 1ull << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [k, c] : a.terms()) {
    std::uint64_t ax = amp_mask(k.x, n), az = amp_mask(k.z, n);
    cplx pre = c * kIPow[popcount(k.x & k.z) % 4];
    for (std::uint64_t r = 0; r < d; ++r) {
      double sgn = (popcount(az & r) & 1) ? -1.0 : 1.0;
      m(r ^ ax, r) += pre * sgn;
    }
  }
  return m;
}

namespace {

void walsh_hadamard(std::vector<cplx>& v) {
  std::size_t d = v.size();
  for (std::size_t h = 1; h < d; h <<= 1) {
    for (std::size_t i = 0; i < d; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        cplx a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

PauliOperator pauli_decompose(const Eigen::MatrixXcd& m, int n_qubits,
                              double prune_tol) {
  std::uint64_t d = 1ull << n_qubits;
  if (static_cast<std::uint64_t>(m.rows()) != d ||
      static_cast<std::uint64_t>(m.cols()) != d)
    throw std::invalid_argument("pauli_decompose: dimension mismatch");
  PauliOperator out(n_qubits);
  std::vector<cplx> h(d);
  for (std::uint64_t qx = 0; qx < (1ull << n_qubits); ++qx) {
    std::uint64_t ax = amp_mask(qx, n_qubits);
    for (std::uint64_t r = 0; r < d; ++r) h[r] = m(r ^ ax, r);
    walsh_hadamard(h);
    // Tr(P(x,z) M) = (-i)^{|x&z|} H(amp(z))
    for (std::uint64_t qz = 0; qz < (1ull << n_qubits); ++qz) {
      int w = popcount(qx & qz);
      cplx c = kIPow[(4 - w % 4) % 4] * h[amp_mask(qz, n_qubits)] /
               static_cast<double>(d);
      if (std::abs(c) >= prune_tol) out.add_term(PauliKey{qx, qz}, c);
    }
  }
  return out;
}

std::string PauliOperator::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : terms_) {
    PauliString s(n_, k.x, k.z, 0);
    std::string letters = s.str().substr(1);  // drop the "+" prefix
    arr.push_back({{"pauli", letters}, {"re", c.real()}, {"im", c.imag()}});
  }
  return arr.dump();
}

PauliOperator PauliOperator::from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array() || arr.empty())
    throw std::invalid_argument("PauliOperator::from_json: expected array");
  int n = -1;
  PauliOperator out(1);
  for (const auto& item : arr) {
    PauliString s = PauliString::from_text(item.at("pauli").get<std::string>());
    if (n < 0) {
      n = s.n_qubits();
      out = PauliOperator(n);
    }
    out.add_term(s, cplx(item.at("re").get<double>(), item.at("im").get<double>()));
  }
  return out;
}

}  // namespace trotkit
