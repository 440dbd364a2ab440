#include "trotkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace trotkit {

EnsembleKind ensemble_from_string(const std::string& name) {
  if (name == "LU" || name == "lu") return EnsembleKind::LU;
  if (name == "GC" || name == "gc") return EnsembleKind::GC;
  if (name == "LC" || name == "lc") return EnsembleKind::LC;
  throw std::invalid_argument("unknown ensemble kind: " + name);
}

StateVector sample_ensemble_state(const StateVector& psi0, EnsembleKind kind,
                                  Rng& rng) {
  switch (kind) {
    case EnsembleKind::LU: {
      StateVector out = psi0;
      for (int q = 0; q < psi0.n_qubits(); ++q)
        out = apply_1q(out, random_haar_1q(rng), q);
      return out;
    }
    case EnsembleKind::GC:
      return apply_clifford(psi0,
                            sample_uniform_clifford(psi0.n_qubits(), rng));
    case EnsembleKind::LC:
      return apply_local_cliffords(
          psi0, sample_local_cliffords(psi0.n_qubits(), rng));
  }
  throw std::invalid_argument("sample_ensemble_state: unknown kind");
}

std::vector<StateVector> sample_ensemble(const StateVector& psi0,
                                         EnsembleKind kind, int n_samples,
                                         Rng& rng) {
  if (n_samples < 1)
    throw std::invalid_argument("sample_ensemble: n_samples must be >= 1");
  std::vector<StateVector> out;
  out.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i)
    out.push_back(sample_ensemble_state(psi0, kind, rng));
  return out;
}

SampleSummary summarize(const std::vector<double>& values) {
  if (values.size() < 4)
    throw std::invalid_argument("summarize: need at least 4 values");
  SampleSummary s;
  s.n = values.size();
  double n = static_cast<double>(s.n);
  double sum = 0;
  s.min = values[0];
  s.max = values[0];
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / n;
  double mu2 = 0, mu3 = 0, mu4 = 0;
  for (double v : values) {
    double d = v - s.mean;
    double d2 = d * d;
    mu2 += d2;
    mu3 += d2 * d;
    mu4 += d2 * d2;
  }
  mu2 /= n;
  mu3 /= n;
  mu4 /= n;
  s.variance = mu2;
  if (mu2 <= 0) {
    s.moments_defined = false;
    s.skewness = std::numeric_limits<double>::quiet_NaN();
    s.kurtosis = std::numeric_limits<double>::quiet_NaN();
  } else {
    s.skewness = mu3 / std::pow(mu2, 1.5);
    s.kurtosis = mu4 / (mu2 * mu2);
  }
  return s;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  if (q <= 0) return v.front();
  if (q >= 1) return v.back();
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

namespace {

double eval_statistic(const std::vector<double>& values,
                      BootstrapStatistic statistic) {
  SampleSummary s = summarize(values);
  return statistic == BootstrapStatistic::Variance ? s.variance : s.kurtosis;
}

}  // namespace

BootstrapCI bootstrap_ci(const std::vector<double>& values,
                         BootstrapStatistic statistic, int m_resamples,
                         double level, Rng& rng) {
  if (m_resamples < 100)
    throw std::invalid_argument("bootstrap_ci: need at least 100 resamples");
  if (values.size() < 10)
    throw std::invalid_argument("bootstrap_ci: need at least 10 values");
  if (level <= 0 || level >= 1)
    throw std::invalid_argument("bootstrap_ci: level must be in (0,1)");
  double point = eval_statistic(values, statistic);
  std::vector<double> deltas(m_resamples);
  std::vector<double> resample(values.size());
  for (int i = 0; i < m_resamples; ++i) {
    for (std::size_t j = 0; j < values.size(); ++j)
      resample[j] = values[rng.uniform_index(values.size())];
    deltas[i] = eval_statistic(resample, statistic) - point;
  }
  double tail = (1.0 - level) / 2.0;
  BootstrapCI ci;
  ci.point = point;
  ci.lower = point - quantile(deltas, 1.0 - tail);
  ci.upper = point - quantile(deltas, tail);
  ci.level = level;
  ci.resamples = m_resamples;
  return ci;
}

double estimate_s_hat(const StateVector& psi, const HamiltonianSpec& h,
                      const ProductFormula& pf, double dt,
                      const ExactEvolver& evolver) {
  if (dt <= 0) throw std::invalid_argument("estimate_s_hat: dt must be positive");
  double err = true_error_one_step(psi, h, pf, dt, evolver);
  return err * err / std::pow(dt, 2 * pf.order + 2);
}

std::vector<double> parallel_map_samples(
    int n_samples, std::uint64_t master_seed, std::uint64_t stream, int workers,
    const std::function<double(int, Rng&)>& fn) {
  std::vector<double> out(n_samples);
  if (workers < 1) workers = 1;
  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      Rng rng(derive_seed(master_seed, stream, static_cast<std::uint64_t>(i)));
      out[i] = fn(i, rng);
    }
  };
  if (workers == 1 || n_samples < 2 * workers) {
    run_range(0, n_samples);
    return out;
  }
  std::vector<std::thread> pool;
  int chunk = (n_samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = w * chunk, hi = std::min(n_samples, (w + 1) * chunk);
    if (lo >= hi) break;
    pool.emplace_back(run_range, lo, hi);
  }
  for (auto& t : pool) t.join();
  return out;
}

void save_samples(const std::string& path, const std::vector<double>& values) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_samples: cannot open " + path);
  std::uint64_t n = values.size();
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
}

}  // namespace trotkit
