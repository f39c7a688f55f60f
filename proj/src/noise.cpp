#include "qfs/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

void validate(const NoiseParams& params, int max_idles, int shots) {
  if (params.t1 <= 0.0 || params.t2 <= 0.0 || params.idle_step <= 0.0) {
    throw std::invalid_argument("noise times must be positive");
  }
  if (max_idles < 0) throw std::invalid_argument("max_idles must be >= 0");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
}

}  // namespace

double decay_probability(double t, double time_constant) {
  if (t < 0.0 || time_constant <= 0.0) {
    throw std::invalid_argument("need t >= 0 and a positive time constant");
  }
  return 1.0 - std::exp(-t / time_constant);
}

DecoherenceCurve relaxation_experiment(const NoiseParams& params,
                                       int max_idles, int shots,
                                       std::uint64_t seed) {
  validate(params, max_idles, shots);
  const double p_step = decay_probability(params.idle_step, params.t1);

  DecoherenceCurve curve;
  curve.shots = shots;
  curve.seed = seed;
  curve.p1.reserve(max_idles + 1);
  for (int k = 0; k <= max_idles; ++k) {
    Rng rng(child_seed(seed, static_cast<std::uint64_t>(k)));
    long ones = 0;
    for (int shot = 0; shot < shots; ++shot) {
      bool excited = true;  // |1> prepared; |0> is absorbing
      for (int step = 0; step < k && excited; ++step) {
        if (rng.uniform01() < p_step) excited = false;
      }
      if (excited) ++ones;
    }
    curve.p1.push_back(static_cast<double>(ones) / shots);
  }
  return curve;
}

DecoherenceCurve dephasing_experiment(const NoiseParams& params, int max_idles,
                                      int shots, std::uint64_t seed) {
  validate(params, max_idles, shots);
  // Half the raw decay probability so the curve saturates at exactly 1/2.
  const double p_step = decay_probability(params.idle_step, params.t2) / 2.0;

  DecoherenceCurve curve;
  curve.shots = shots;
  curve.seed = seed;
  curve.p1.reserve(max_idles + 1);
  for (int k = 0; k <= max_idles; ++k) {
    Rng rng(child_seed(seed, static_cast<std::uint64_t>(k)));
    long ones = 0;
    for (int shot = 0; shot < shots; ++shot) {
      int flips = 0;  // |+> with an odd number of Z flips reads out as |1>
      for (int step = 0; step < k; ++step) {
        if (rng.uniform01() < p_step) ++flips;
      }
      if (flips % 2 == 1) ++ones;
    }
    curve.p1.push_back(static_cast<double>(ones) / shots);
  }
  return curve;
}

double relaxation_expectation(const NoiseParams& params, int idles) {
  return std::exp(-idles * params.idle_step / params.t1);
}

double dephasing_expectation(const NoiseParams& params, int idles) {
  return 0.5 * (1.0 - std::exp(-idles * params.idle_step / params.t2));
}

}  // namespace qfs
