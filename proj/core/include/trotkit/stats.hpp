#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trotkit/clifford.hpp"
#include "trotkit/hamiltonian.hpp"
#include "trotkit/rng.hpp"
#include "trotkit/statevector.hpp"
#include "trotkit/trotter.hpp"

namespace trotkit {

enum class EnsembleKind { LU, GC, LC };

EnsembleKind ensemble_from_string(const std::string& name);

/// one draw from the chosen orbit of psi0: per-qubit Haar unitaries (LU),
/// a global uniform Clifford (GC), or per-qubit uniform Cliffords (LC)
StateVector sample_ensemble_state(const StateVector& psi0, EnsembleKind kind,
                                  Rng& rng);

/// n_samples independent draws
std::vector<StateVector> sample_ensemble(const StateVector& psi0,
                                         EnsembleKind kind, int n_samples,
                                         Rng& rng);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0;
  double variance = 0;   // population (biased) estimator
  double skewness = 0;   // kappa_3 = mu3 / mu2^{3/2}
  double kurtosis = 0;   // kappa_4 = mu4 / mu2^2
  double min = 0;
  double max = 0;
  bool moments_defined = true;  // false when the sample variance vanishes
};

/// plain population moment estimators; requires n >= 4
SampleSummary summarize(const std::vector<double>& values);

enum class BootstrapStatistic { Variance, Kurtosis };

struct BootstrapCI {
  double point = 0;
  double lower = 0;
  double upper = 0;
  double level = 0.95;
  int resamples = 0;
};

/// basic (reverse-percentile) bootstrap: CI = [T - q_hi, T - q_lo] over the
/// resampled deltas T(X^i) - T(X)
BootstrapCI bootstrap_ci(const std::vector<double>& values,
                         BootstrapStatistic statistic, int m_resamples,
                         double level, Rng& rng);

/// s_hat = true one-step error squared / dt^{2p+2}
double estimate_s_hat(const StateVector& psi, const HamiltonianSpec& h,
                      const ProductFormula& pf, double dt,
                      const ExactEvolver& evolver);

/// Deterministic parallel map over sample indices: every sample gets an RNG
/// derived from (master_seed, stream, index), and results land by index, so
/// the output is identical for any worker count.
std::vector<double> parallel_map_samples(
    int n_samples, std::uint64_t master_seed, std::uint64_t stream, int workers,
    const std::function<double(int, Rng&)>& fn);

void save_samples(const std::string& path, const std::vector<double>& values);

double quantile(std::vector<double> sorted_or_not, double q);

}  // namespace trotkit
