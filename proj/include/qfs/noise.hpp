#pragma once

#include <cstdint>
#include <vector>

namespace qfs {

// Decoherence model inputs; times share one unit (microseconds in the CLI).
struct NoiseParams {
  double t1 = 100.0;        // amplitude-relaxation time
  double t2 = 100.0;        // dephasing time
  double idle_step = 0.1;   // duration of one identity gate
};

// P(decay within t) = 1 - e^{-t/T}.
double decay_probability(double t, double time_constant);

// P(measure 1) per idle count k = 0..max_idles, from `shots` Monte Carlo
// trajectories per point.
struct DecoherenceCurve {
  std::vector<double> p1;
  int shots = 0;
  std::uint64_t seed = 0;
};

// Prepare |1>, idle k steps (each step decays |1>->|0> with probability
// decay_probability(idle_step, T1)), measure. Expectation e^{-k idle/T1}.
DecoherenceCurve relaxation_experiment(const NoiseParams& params,
                                       int max_idles, int shots,
                                       std::uint64_t seed);

// Prepare |+>, idle k steps (each step applies Z with probability
// (1 - e^{-idle/T2})/2), apply H, measure. Expectation rises from 0 to 1/2.
DecoherenceCurve dephasing_experiment(const NoiseParams& params, int max_idles,
                                      int shots, std::uint64_t seed);

// Closed-form expectations the stochastic curves are tested against.
double relaxation_expectation(const NoiseParams& params, int idles);
double dephasing_expectation(const NoiseParams& params, int idles);

}  // namespace qfs
