#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfs/distribution.hpp"

namespace qfs {

enum class RiskMode { kExact, kSampled };

// Risk metrics in bin units (multiply through bin edges for P/L brackets).
// `var_bins`/`cvar_bins` run parallel to `alphas`. `backend` is "exact",
// "sampled", or "classical". `variance_clamped` flags a sampled run whose
// E[X²] − E[X]² came out negative and was clamped to zero.
struct RiskReport {
  std::vector<double> alphas;
  double expected_value = 0.0;
  double std_dev = 0.0;
  std::vector<int> var_bins;
  std::vector<double> cvar_bins;
  std::string backend;
  int shots = 0;
  std::uint64_t seed = 0;
  bool variance_clamped = false;
};

// E[X] in bin units via the amplitude-encoded circuit: the distribution is
// prepared on n qubits, an ancilla is rotated by α_i = 2·asin(√(i/(N−1)))
// per basis state, and E[X] = P(ancilla = 1)·(N−1). Exact mode reads the
// ancilla marginal; sampled mode estimates it from `shots` measurements.
double expected_value(const DiscreteDistribution& dist, RiskMode mode,
                      int shots, std::uint64_t seed);

// σ = √(E[X²] − E[X]²) with the second moment from the f(i) = i²/(N−1)²
// rotation schedule. `clamped`, when given, reports a negative sampled
// variance (clamped to zero).
double std_dev(const DiscreteDistribution& dist, RiskMode mode, int shots,
               std::uint64_t seed, bool* clamped = nullptr);

// Smallest level l with P[X ≤ l] ≥ 1 − alpha, located by hybrid bisection:
// each probe runs the threshold-comparator circuit (ancilla flipped for all
// i ≤ l) and reads P(ancilla = 1); the interval bookkeeping is classical.
int value_at_risk(const DiscreteDistribution& dist, double alpha,
                  RiskMode mode, int shots, std::uint64_t seed);

// CVaR = P₁·VaR / P[X ≤ VaR] with the partial-mean schedule
// α_i = 2·asin(√(i/VaR)) for i ≤ VaR. The denominator is the exact tail mass
// in exact mode and the measured comparator probability at the VaR level in
// sampled mode. Returns 0 when VaR = 0.
double conditional_var(const DiscreteDistribution& dist, double alpha,
                       RiskMode mode, int shots, std::uint64_t seed);

// All metrics in one pass (shares the per-metric seed streams used by the
// individual functions above).
RiskReport quantum_risk_report(const DiscreteDistribution& dist,
                               const std::vector<double>& alphas,
                               RiskMode mode, int shots, std::uint64_t seed);

// Closed-form reference: E[X] = Σ i·p_i, σ from exact moments, VaR as the
// same percentile definition, CVaR = Σ_{i≤VaR} i·p_i / P[X ≤ VaR].
RiskReport classical_risk_oracle(const DiscreteDistribution& dist,
                                 const std::vector<double>& alphas);

// Continuous-series reference metrics (no binning): empirical mean, standard
// deviation, VaR as the (1−α) order statistic, and CVaR as the mean of
// values at or below VaR. Reported for comparison next to binned results.
struct SeriesMetrics {
  double mean = 0.0;
  double std_dev = 0.0;
  double var = 0.0;
  double cvar = 0.0;
};
SeriesMetrics classical_series_metrics(const std::vector<double>& series,
                                       double alpha);

}  // namespace qfs
