#include "doctest.h"

#include "trotkit/clifford.hpp"
#include "trotkit/moments.hpp"
#include "trotkit/resources.hpp"
#include "trotkit/stats.hpp"

using namespace trotkit;

namespace {

PauliOperator random_hermitian(int n, int terms, Rng& rng) {
  PauliOperator a(n);
  for (int i = 0; i < terms; ++i)
    a.add_term(PauliKey{rng.uniform_index(1ull << n), rng.uniform_index(1ull << n)},
               rng.normal());
  return a;
}

double dense_B_oracle(const PauliOperator& edag_e) {
  Eigen::MatrixXcd m = to_dense(edag_e);
  Eigen::MatrixXcd m2 = m * m;
  double t1 = m.trace().real();
  double t2 = m2.trace().real();
  double t3 = (m2 * m).trace().real();
  double t4 = (m2 * m2).trace().real();
  return (6 * t4 + 8 * t3 * t1 + 3 * t2 * t2 + 6 * t2 * t1 * t1 +
          t1 * t1 * t1 * t1) /
         24.0;
}

}  // namespace

TEST_CASE("error pair operator") {
  HamiltonianSpec h = qimf(5, 0.8090, 0.9045, 1.0);
  std::vector<PauliOperator> terms = qimf_error_terms(h);
  SUBCASE("Hermitian and traceless symbolically") {
    for (int j = 0; j < 5; ++j)
      for (int jp = j; jp < 5; ++jp) {
        PauliOperator pair = error_pair_operator(terms[j], terms[jp]);
        CHECK(pair.is_hermitian());
        CHECK(std::abs(pair.normalized_trace()) < 1e-14);
      }
  }
  SUBCASE("neighbor support stays within three sites") {
    for (int j = 0; j + 1 < 5; ++j) {
      PauliOperator pair = error_pair_operator(terms[j], terms[j + 1]);
      for (int q : pair.support()) {
        CHECK(q >= j);
        CHECK(q <= j + 2);
      }
    }
  }
  SUBCASE("single-word term with E^dag E proportional to I vanishes") {
    PauliOperator ej = PauliOperator::from_string(
        PauliString::from_text("ZII"), cplx(0, 2.0 * 0.7));
    CHECK(error_pair_operator(ej, ej).is_zero());
  }
}

TEST_CASE("exact LU variance") {
  SUBCASE("E^dag E proportional to the identity gives zero variance") {
    Rng rng(1);
    StateVector psi = StateVector::random_haar(3, rng);
    PauliOperator e = PauliOperator::from_string(PauliString::from_text("XIZ"),
                                                 cplx(0.3, 1.2));
    CHECK(exact_variance_lu(psi, op_mul(dagger(e), e)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("maximally mixed marginals kill the variance") {
    // E = Z0 + Z0 Z1: E^dag E = 2I + 2 Z1, support {1}; on a Bell pair the
    // one-qubit marginal is I/2
    Eigen::Matrix2cd had;
    double s = 1.0 / std::sqrt(2.0);
    had << s, s, s, -s;
    Eigen::Matrix4cd cx = Eigen::Matrix4cd::Zero();
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1;
    StateVector bell = apply_2q(apply_1q(StateVector::zero_state(2), had, 0),
                                cx, 0, 1);
    PauliOperator e(2);
    e.add_term(PauliString::from_text("ZI"), 1.0);
    e.add_term(PauliString::from_text("ZZ"), 1.0);
    std::vector<PauliOperator> terms = {
        PauliOperator::from_string(PauliString::from_text("ZI")),
        PauliOperator::from_string(PauliString::from_text("ZZ"))};
    VarianceBoundReport rep = variance_bound(bell, terms);
    CHECK(rep.exact_variance == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.trace_distance_bound == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("agrees with Monte Carlo sampling at N=3") {
    Rng rng(5);
    HamiltonianSpec h = qimf(3, 0.8090, 0.9045, 1.0);
    PauliOperator e = leading_error_pf1(h);
    PauliOperator edag_e = op_mul(dagger(e), e);
    StateVector psi = StateVector::random_haar(3, rng);
    double exact = exact_variance_lu(psi, edag_e);
    const int n_samples = 20000;
    std::vector<double> vals(n_samples);
    for (int i = 0; i < n_samples; ++i)
      vals[i] = s_E(sample_ensemble_state(psi, EnsembleKind::LU, rng), e);
    SampleSummary sum = summarize(vals);
    // variance of the sample variance ~ (mu4 - mu2^2)/n
    double mu2 = sum.variance;
    double mu4 = sum.kurtosis * mu2 * mu2;
    double sd = std::sqrt((mu4 - mu2 * mu2) / n_samples);
    CHECK(std::abs(sum.variance - exact) < 4.0 * sd);
  }
}

TEST_CASE("variance bound chain at N=4: exact <= trace distance <= entropy") {
  HamiltonianSpec h = qimf(4, 0.8090, 0.9045, 1.0);
  std::vector<PauliOperator> terms = qimf_error_terms(h);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector psi = StateVector::random_haar(4, rng);
    VarianceBoundReport rep = variance_bound(psi, terms);
    CHECK(rep.exact_variance <= rep.trace_distance_bound + 1e-9);
    CHECK(rep.trace_distance_bound <= rep.entropy_bound + 1e-9);
    CHECK(rep.exact_variance >= 0.0);
  }
}

TEST_CASE("product state saturates the entropy terms") {
  HamiltonianSpec h = qimf(3, 0.8090, 0.9045, 1.0);
  std::vector<PauliOperator> terms = qimf_error_terms(h);
  StateVector psi = StateVector::zero_state(3);
  VarianceBoundReport rep = variance_bound(psi, terms);
  double expect = 0;
  for (const auto& p : rep.pairs) {
    CHECK(p.entropy_bits == doctest::Approx(0.0).epsilon(1e-12));
    expect += p.a_jjp * std::sqrt(2.0 * p.support.size());
  }
  CHECK(rep.entropy_bound == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("variance bound report serializes") {
  HamiltonianSpec h = qimf(3, 0.8, 0.9, 1.0);
  VarianceBoundReport rep =
      variance_bound(StateVector::zero_state(3), qimf_error_terms(h));
  std::string j = rep.to_json();
  CHECK(j.find("entropy_bound") != std::string::npos);
  CHECK(j.find("pairs") != std::string::npos);
}

TEST_CASE("haar moments") {
  SUBCASE("identity operator: all moments 1") {
    HaarMoments m = haar_moments(PauliOperator::identity(3));
    CHECK(m.m1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.m2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.m3 == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("first moment is the squared Frobenius norm") {
    HamiltonianSpec h = qimf(3, 0.8090, 0.9045, 1.0);
    PauliOperator e = leading_error_pf1(h);
    HaarMoments m = haar_moments(op_mul(dagger(e), e));
    CHECK(m.m1 == doctest::Approx(frobenius_norm_sq(e)).epsilon(1e-12));
  }
}

TEST_CASE("compute_B") {
  SUBCASE("identity plug-in") {
    for (int n : {1, 2, 3}) {
      double d = double(1 << n);
      double want = (6 * d + 8 * d * d + 3 * d * d + 6 * d * d * d + d * d * d * d) / 24.0;
      CHECK(compute_B(PauliOperator::identity(n)) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
  SUBCASE("sparse equals dense at N=3") {
    Rng rng(11);
    PauliOperator a = random_hermitian(3, 6, rng);
    PauliOperator edag_e = op_mul(dagger(a), a);
    CHECK(compute_B(edag_e) ==
          doctest::Approx(dense_B_oracle(edag_e)).epsilon(1e-8));
    CHECK(compute_B(edag_e) >= 0.0);
  }
}

TEST_CASE("compute_A symbolic equals the brute-force oracle") {
  SUBCASE("identity at N=1: hand-checkable value") {
    // (6*2 + 8*2*2 + 3*4 + 6*2*4 + 16) for P=I plus 24 for each of X,Y,Z,
    // over 24 d^2: A = (d+1)(d+2)/6 = 2
    CHECK(compute_A_dense(PauliOperator::identity(1)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(compute_A(PauliOperator::identity(1)) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("identity formula A = (d+1)(d+2)/6") {
    for (int n : {1, 2, 3}) {
      double d = double(1 << n);
      CHECK(compute_A(PauliOperator::identity(n)) ==
            doctest::Approx((d + 1) * (d + 2) / 6.0).epsilon(1e-12));
    }
  }
  SUBCASE("random Hermitian operators at N <= 3") {
    Rng rng(13);
    for (int n : {1, 2, 3}) {
      PauliOperator a = random_hermitian(n, 4 + n, rng);
      PauliOperator edag_e = op_mul(dagger(a), a);
      double sym = compute_A(edag_e);
      double dense = compute_A_dense(edag_e);
      CHECK(sym == doctest::Approx(dense).epsilon(1e-8));
    }
  }
  SUBCASE("QIMF error operator at N=3") {
    HamiltonianSpec h = qimf(3, 0.8090, 0.9045, 1.0);
    PauliOperator e = leading_error_pf1(h);
    PauliOperator edag_e = op_mul(dagger(e), e);
    CHECK(compute_A(edag_e) ==
          doctest::Approx(compute_A_dense(edag_e)).epsilon(1e-8));
  }
  SUBCASE("term budget enforced") {
    Rng rng(17);
    PauliOperator a = random_hermitian(3, 12, rng);
    CHECK_THROWS_AS(compute_A(op_mul(dagger(a), a), 10), std::runtime_error);
  }
}

TEST_CASE("fourth moment closed form") {
  SUBCASE("degenerate distribution: E^dag E = I gives m4 = 1 for any M") {
    for (int n : {1, 2, 3}) {
      double d = double(1 << n);
      double a = compute_A(PauliOperator::identity(n));
      double b = compute_B(PauliOperator::identity(n));
      for (double m : {0.0, 0.3, 0.7})
        CHECK(fourth_moment(a, b, m, d) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("m4 is decreasing in M when (d^2+3d)A > 4B") {
    HamiltonianSpec h = qimf(2, 0.8090, 0.9045, 1.0);
    PauliOperator e = leading_error_pf1(h);
    PauliOperator edag_e = op_mul(dagger(e), e);
    double d = 4.0;
    double a = compute_A(edag_e), b = compute_B(edag_e);
    if ((d * d + 3 * d) * a > 4 * b)
      CHECK(fourth_moment(a, b, 0.1, d) > fourth_moment(a, b, 0.5, d));
  }
}

TEST_CASE("N=2 exhaustive Clifford orbit fixes all four moments") {
  // this adjudicates the fourth-moment denominator printing
  HamiltonianSpec h = qimf(2, 0.8090, 0.9045, 1.0);
  PauliOperator e = leading_error_pf1(h);
  PauliOperator edag_e = op_mul(dagger(e), e);
  HaarMoments hm = haar_moments(edag_e);
  double a_val = compute_A(edag_e);
  double b_val = compute_B(edag_e);

  std::vector<CliffordTableau> group = enumerate_cliffords(2);
  REQUIRE(group.size() == 11520);

  Rng rng(19);
  Eigen::Matrix2cd tgate;
  tgate << 1, 0, 0, std::exp(cplx(0, 0.78539816339744830961));
  std::vector<StateVector> starts;
  starts.push_back(StateVector::zero_state(2));
  {
    Eigen::Matrix2cd had;
    double s = 1.0 / std::sqrt(2.0);
    had << s, s, s, -s;
    StateVector t1 = apply_1q(apply_1q(StateVector::zero_state(2), had, 0), tgate, 0);
    starts.push_back(t1);
    starts.push_back(apply_1q(apply_1q(t1, had, 1), tgate, 1));
  }
  starts.push_back(StateVector::random_haar(2, rng));

  for (const StateVector& psi0 : starts) {
    double m_val = magic(psi0);
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (const auto& tab : group) {
      double se = s_E(apply_clifford(psi0, tab), e);
      s1 += se;
      s2 += se * se;
      s3 += se * se * se;
      s4 += se * se * se * se;
    }
    double n = double(group.size());
    s1 /= n;
    s2 /= n;
    s3 /= n;
    s4 /= n;
    CHECK(s1 == doctest::Approx(hm.m1).epsilon(1e-8));
    CHECK(s2 == doctest::Approx(hm.m2).epsilon(1e-8));
    CHECK(s3 == doctest::Approx(hm.m3).epsilon(1e-8));
    CHECK(s4 ==
          doctest::Approx(fourth_moment(a_val, b_val, m_val, 4.0)).epsilon(1e-8));
  }
}

TEST_CASE("kurtosis law") {
  HamiltonianSpec h = qimf(3, 0.8090, 0.9045, 1.0);
  PauliOperator e = leading_error_pf1(h);
  PauliOperator edag_e = op_mul(dagger(e), e);
  KurtosisLaw law = kurtosis_law(edag_e);

  SUBCASE("degenerate distribution raises") {
    CHECK_THROWS_AS(kurtosis_law(PauliOperator::identity(3)),
                    std::domain_error);
  }
  SUBCASE("scale covariance: alpha and beta invariant under E -> cE") {
    KurtosisLaw scaled = kurtosis_law(op_mul(dagger(scale(e, 1.7)),
                                             scale(e, 1.7)));
    CHECK(scaled.alpha == doctest::Approx(law.alpha).epsilon(1e-9));
    CHECK(scaled.beta == doctest::Approx(law.beta).epsilon(1e-9));
  }
  SUBCASE("exact variance scales as |c|^4") {
    Rng rng(23);
    StateVector psi = StateVector::random_haar(3, rng);
    double v1 = exact_variance_lu(psi, edag_e);
    PauliOperator e2 = scale(e, 2.0);
    double v2 = exact_variance_lu(psi, op_mul(dagger(e2), e2));
    CHECK(v2 == doctest::Approx(16.0 * v1).epsilon(1e-10));
  }
  SUBCASE("predicted kurtosis nonnegative on a magic grid") {
    for (double m = 0.0; m < 1.0; m += 0.05)
      CHECK(law.predicted_kurtosis(m) >= 0.0);
  }
}

TEST_CASE("sum of Pauli conjugations") {
  SUBCASE("identity at N=1") {
    CHECK(std::abs(sum_pauli_conjugation(Eigen::MatrixXcd::Identity(2, 2), 1) -
                   cplx(8, 0)) < 1e-12);
  }
  SUBCASE("random Hermitian at N=2 equals d Tr(O)^2") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXcd g(4, 4);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
      Eigen::MatrixXcd o = (g + g.adjoint()) / 2.0;
      cplx want = 4.0 * o.trace() * o.trace();
      CHECK(std::abs(sum_pauli_conjugation(o, 2) - want) < 1e-10);
    }
  }
  SUBCASE("traceless operators give zero") {
    Eigen::MatrixXcd z = PauliString::from_text("Z").to_dense();
    CHECK(std::abs(sum_pauli_conjugation(z, 1)) < 1e-12);
  }
}

TEST_CASE("tail bounds") {
  CHECK(chebyshev_bound(2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(chebyshev_bound(0.0), std::domain_error);

  double k3 = 0.5, k4 = 3.0;
  double prev = 1.0;
  for (double t : {2.0, 3.0, 4.0, 5.0}) {
    double b = zelen_bound(k3, k4, t);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(zelen_bound(0.5, 1.2, 3.0), std::domain_error);
  CHECK_THROWS_AS(zelen_bound(0.5, 3.0, 0.5), std::domain_error);
}

TEST_CASE("GC tail frequencies stay below the Zelen bound at N=6") {
  int n = 6;
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  PauliOperator e = leading_error_pf1(h);
  Rng rng(37);
  StateVector psi0 = StateVector::random_haar(n, rng);
  const int n_samples = 20000;
  std::vector<double> vals(n_samples);
  for (auto& v : vals)
    v = s_E(sample_ensemble_state(psi0, EnsembleKind::GC, rng), e);
  SampleSummary sum = summarize(vals);
  double sigma = std::sqrt(sum.variance);
  for (double t : {3.0, 4.0, 5.0}) {
    int count = 0;
    for (double v : vals)
      if (v - sum.mean >= t * sigma) ++count;
    double freq = double(count) / n_samples;
    double bound = zelen_bound(sum.skewness, sum.kurtosis, t);
    CHECK(freq <= bound);
  }
}

TEST_CASE("long-time variance bound dominates a Monte Carlo smoke run") {
  int n = 4, r = 5;
  double dt = 0.1;
  HamiltonianSpec h = heisenberg(n, 0.2, 1.0);
  ProductFormula pf = ProductFormula::pf2(3);
  ExactEvolver ev(h);
  PauliOperator e = leading_error(h, pf);
  std::vector<PauliOperator> terms = decompose_by_leading_qubit(e);
  Rng rng(31);
  StateVector psi = StateVector::random_haar(n, rng);
  LongTimeBoundReport rep = long_time_variance_bound(psi, terms, h, pf, dt, r);
  REQUIRE(rep.per_step_bounds.size() == std::size_t(r));
  std::vector<double> vals(400);
  for (auto& v : vals)
    v = true_error_long(sample_ensemble_state(psi, EnsembleKind::LU, rng), h,
                        pf, dt, r, ev);
  SampleSummary sum = summarize(vals);
  CHECK(sum.variance <= rep.variance_bound);
  CHECK_THROWS_AS(
      long_time_variance_bound(StateVector::zero_state(7), terms, h, pf, dt, r),
      std::invalid_argument);
}
