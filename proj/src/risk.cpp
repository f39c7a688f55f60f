#include "qfs/risk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qfs/circuit.hpp"
#include "qfs/rng.hpp"
#include "qfs/state_prep.hpp"

namespace qfs {

namespace {

// Seed-stream layout inside one master seed, so a full report and the
// standalone metric functions stay individually reproducible.
constexpr std::uint64_t kStreamExpected = 1;
constexpr std::uint64_t kStreamSecondMoment = 2;
constexpr std::uint64_t kStreamVarBase = 3;  // +2 per alpha, CVaR next slot
constexpr std::uint64_t kStreamCvarDenominator = 999;
constexpr std::uint64_t kStreamCvarNumerator = 1000;

// P(ancilla = 1) for the generic risk circuit: the distribution prepared on
// n qubits and a multiplexed Ry(2·asin(√f_i)) onto a fresh ancilla. This is
// the one quantum primitive all four metrics share; they differ only in the
// schedule f.
double ancilla_p1(const DiscreteDistribution& dist,
                  const std::vector<double>& f, RiskMode mode, int shots,
                  std::uint64_t seed) {
  const int n = dist.num_qubits();
  std::vector<double> alphas(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    alphas[i] = 2.0 * std::asin(std::sqrt(std::clamp(f[i], 0.0, 1.0)));
  }
  std::vector<int> controls(n);
  for (int q = 0; q < n; ++q) controls[q] = q;

  Circuit circuit(n + 1);
  circuit.append(prepare_distribution(dist.probabilities));
  circuit.append(multiplexed_ry(alphas, controls, n));
  const StateVector state = run(circuit, zero_state(n + 1));

  if (mode == RiskMode::kExact) {
    return marginal_probability(state, n, 1);
  }
  if (shots < 1) throw std::invalid_argument("sampled mode needs shots >= 1");
  const MeasurementCounts counts = sample(state, shots, seed);
  long ones = 0;
  for (const auto& [key, count] : counts.counts) {
    if (key[n] == '1') ones += count;
  }
  return static_cast<double>(ones) / shots;
}

// Threshold comparator: ancilla flipped for every basis state i ≤ level, so
// P(ancilla = 1) = P[X ≤ level].
double comparator_p1(const DiscreteDistribution& dist, int level,
                     RiskMode mode, int shots, std::uint64_t seed) {
  std::vector<double> f(dist.probabilities.size(), 0.0);
  for (int i = 0; i <= level; ++i) f[i] = 1.0;
  return ancilla_p1(dist, f, mode, shots, seed);
}

// Bisection for the smallest level with comparator probability ≥ 1 − alpha.
// Returns the level and the probe measurements (reused by CVaR so its
// denominator is consistent with the probes that located the VaR).
std::pair<int, std::map<int, double>> var_with_probes(
    const DiscreteDistribution& dist, double alpha, RiskMode mode, int shots,
    std::uint64_t seed) {
  dist.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("significance level must be in (0, 1)");
  }
  const double threshold = 1.0 - alpha;
  std::map<int, double> probes;
  // Degenerate guard straight from the classical array: if the first bin
  // already carries the tail mass, no quantum probe is needed.
  if (threshold <= dist.probabilities[0]) return {0, probes};

  int lo = 0;  // known below threshold
  int hi = static_cast<int>(dist.probabilities.size()) - 1;  // P = 1 ≥ thr
  std::uint64_t probe_index = 0;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const double p1 = comparator_p1(dist, mid, mode, shots,
                                    child_seed(seed, probe_index++));
    probes[mid] = p1;
    if (p1 >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, probes};
}

double conditional_var_given(const DiscreteDistribution& dist, int var_level,
                             const std::map<int, double>& probes,
                             RiskMode mode, int shots, std::uint64_t seed) {
  if (var_level == 0) return 0.0;  // all mass below VaR sits in bin 0

  std::vector<double> f(dist.probabilities.size(), 0.0);
  for (int i = 0; i <= var_level; ++i) {
    f[i] = static_cast<double>(i) / var_level;
  }
  const double p1 = ancilla_p1(dist, f, mode, shots,
                               child_seed(seed, kStreamCvarNumerator));

  double denom = 0.0;
  if (mode == RiskMode::kExact) {
    for (int i = 0; i <= var_level; ++i) denom += dist.probabilities[i];
  } else {
    // Measured P[X ≤ VaR]: reuse the bisection probe at the VaR level, or
    // run the comparator once more if bisection never landed there.
    const auto it = probes.find(var_level);
    denom = (it != probes.end())
                ? it->second
                : comparator_p1(dist, var_level, mode, shots,
                                child_seed(seed, kStreamCvarDenominator));
  }
  if (denom <= 0.0) return 0.0;
  return p1 * var_level / denom;
}

double second_moment_p1_to_sigma(double e1, double e2, bool* clamped) {
  double variance = e2 - e1 * e1;
  if (clamped) *clamped = false;
  if (variance < 0.0) {
    variance = 0.0;
    if (clamped) *clamped = true;
  }
  return std::sqrt(variance);
}

}  // namespace

double expected_value(const DiscreteDistribution& dist, RiskMode mode,
                      int shots, std::uint64_t seed) {
  dist.validate();
  const std::size_t n_states = dist.probabilities.size();
  std::vector<double> f(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    f[i] = static_cast<double>(i) / (n_states - 1);
  }
  const double p1 = ancilla_p1(dist, f, mode, shots, seed);
  return p1 * (n_states - 1);
}

double std_dev(const DiscreteDistribution& dist, RiskMode mode, int shots,
               std::uint64_t seed, bool* clamped) {
  dist.validate();
  const std::size_t n_states = dist.probabilities.size();
  const double scale = static_cast<double>(n_states - 1);
  std::vector<double> f(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    f[i] = (i / scale) * (i / scale);
  }
  const double e1 = expected_value(dist, mode, shots,
                                   child_seed(seed, kStreamExpected));
  const double p1 =
      ancilla_p1(dist, f, mode, shots, child_seed(seed, kStreamSecondMoment));
  const double e2 = p1 * scale * scale;
  return second_moment_p1_to_sigma(e1, e2, clamped);
}

int value_at_risk(const DiscreteDistribution& dist, double alpha,
                  RiskMode mode, int shots, std::uint64_t seed) {
  return var_with_probes(dist, alpha, mode, shots, seed).first;
}

double conditional_var(const DiscreteDistribution& dist, double alpha,
                       RiskMode mode, int shots, std::uint64_t seed) {
  const auto [var_level, probes] =
      var_with_probes(dist, alpha, mode, shots, seed);
  return conditional_var_given(dist, var_level, probes, mode, shots, seed);
}

RiskReport quantum_risk_report(const DiscreteDistribution& dist,
                               const std::vector<double>& alphas,
                               RiskMode mode, int shots, std::uint64_t seed) {
  dist.validate();
  RiskReport report;
  report.alphas = alphas;
  report.backend = (mode == RiskMode::kExact) ? "exact" : "sampled";
  report.shots = (mode == RiskMode::kExact) ? 0 : shots;
  report.seed = seed;

  report.expected_value = expected_value(dist, mode, shots,
                                         child_seed(seed, kStreamExpected));
  const double e1 = report.expected_value;
  const std::size_t n_states = dist.probabilities.size();
  const double scale = static_cast<double>(n_states - 1);
  std::vector<double> f2(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    f2[i] = (i / scale) * (i / scale);
  }
  const double e2 = ancilla_p1(dist, f2, mode, shots,
                               child_seed(seed, kStreamSecondMoment)) *
                    scale * scale;
  report.std_dev = second_moment_p1_to_sigma(e1, e2, &report.variance_clamped);

  for (std::size_t j = 0; j < alphas.size(); ++j) {
    const std::uint64_t var_seed = child_seed(seed, kStreamVarBase + 2 * j);
    const std::uint64_t cvar_seed =
        child_seed(seed, kStreamVarBase + 2 * j + 1);
    const auto [var_level, probes] =
        var_with_probes(dist, alphas[j], mode, shots, var_seed);
    report.var_bins.push_back(var_level);
    report.cvar_bins.push_back(conditional_var_given(
        dist, var_level, probes, mode, shots, cvar_seed));
  }
  return report;
}

RiskReport classical_risk_oracle(const DiscreteDistribution& dist,
                                 const std::vector<double>& alphas) {
  dist.validate();
  const std::vector<double>& p = dist.probabilities;

  RiskReport report;
  report.alphas = alphas;
  report.backend = "classical";

  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    e1 += i * p[i];
    e2 += static_cast<double>(i) * i * p[i];
  }
  report.expected_value = e1;
  report.std_dev = std::sqrt(std::max(0.0, e2 - e1 * e1));

  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("significance level must be in (0, 1)");
    }
    const double threshold = 1.0 - alpha;
    int var_level = static_cast<int>(p.size()) - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      cum += p[i];
      if (cum >= threshold) {
        var_level = static_cast<int>(i);
        break;
      }
    }
    report.var_bins.push_back(var_level);

    if (var_level == 0) {
      report.cvar_bins.push_back(0.0);
      continue;
    }
    double tail_mass = 0.0, tail_mean = 0.0;
    for (int i = 0; i <= var_level; ++i) {
      tail_mass += p[i];
      tail_mean += i * p[i];
    }
    report.cvar_bins.push_back(tail_mass > 0.0 ? tail_mean / tail_mass : 0.0);
  }
  return report;
}

SeriesMetrics classical_series_metrics(const std::vector<double>& series,
                                       double alpha) {
  if (series.empty()) throw std::invalid_argument("empty P/L series");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("significance level must be in (0, 1)");
  }
  std::vector<double> sorted = series;
  std::sort(sorted.begin(), sorted.end());

  SeriesMetrics m;
  double sum = 0.0;
  for (double v : sorted) sum += v;
  m.mean = sum / sorted.size();
  double sq = 0.0;
  for (double v : sorted) sq += (v - m.mean) * (v - m.mean);
  m.std_dev = std::sqrt(sq / sorted.size());

  const double threshold = 1.0 - alpha;
  const std::size_t k = std::min<std::size_t>(
      sorted.size() - 1,
      static_cast<std::size_t>(
          std::max(0.0, std::ceil(threshold * sorted.size()) - 1.0)));
  m.var = sorted[k];
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i) tail += sorted[i];
  m.cvar = tail / (k + 1);
  return m;
}

}  // namespace qfs
