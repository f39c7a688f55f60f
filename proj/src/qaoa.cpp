#include "qfs/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfs/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qfs {

namespace {

constexpr double kPi = std::numbers::pi;

// Seed streams carved out of the master seed. Evaluation k of restart r
// always samples with the same child seed, whatever thread runs it.
std::uint64_t eval_seed(std::uint64_t master, int restart, int evaluation) {
  return child_seed(master, static_cast<std::uint64_t>(restart) * 1000000 +
                                static_cast<std::uint64_t>(evaluation));
}

std::uint64_t start_seed(std::uint64_t master, int restart) {
  return child_seed(master, 900000000ull + static_cast<std::uint64_t>(restart));
}

std::vector<int> key_bits(const std::string& key) {
  std::vector<int> bits(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) bits[i] = key[i] == '1' ? 1 : 0;
  return bits;
}

struct RestartOutcome {
  std::vector<int> best_bits;
  double best_objective = 0.0;
  bool has_best = false;
  double best_energy = 0.0;
  std::vector<double> best_params;
  int evaluations = 0;
  bool exhausted = false;
  std::vector<QaoaTracePoint> trace;
};

// One seeded Nelder-Mead trajectory (reflection 1, expansion 2, contraction
// 1/2, shrink 1/2) over the 2p-dimensional (β, γ) space.
RestartOutcome run_restart(const QuboTask& task, const IsingModel& model,
                           const QaoaConfig& config, int restart) {
  const int p = config.depth;
  const int dim = 2 * p;
  RestartOutcome out;

  const auto evaluate = [&](const std::vector<double>& params) {
    const std::vector<double> betas(params.begin(), params.begin() + p);
    const std::vector<double> gammas(params.begin() + p, params.end());
    const Circuit circuit = qaoa_ansatz(model, betas, gammas);
    const StateVector state = run(circuit, zero_state(model.size()));
    const MeasurementCounts counts =
        sample(state, config.shots,
               eval_seed(config.seed, restart, out.evaluations));
    const double energy = expected_energy(model, counts);

    for (const auto& [key, count] : counts.counts) {
      const std::vector<int> bits = key_bits(key);
      const double objective = qubo_value(task, bits);
      if (!out.has_best || objective < out.best_objective) {
        out.best_bits = bits;
        out.best_objective = objective;
        out.has_best = true;
      }
    }
    if (out.trace.empty() || energy < out.best_energy) {
      out.best_energy = energy;
      out.best_params = params;
    }
    out.trace.push_back(
        {restart, out.evaluations, betas, gammas, energy});
    ++out.evaluations;
    return energy;
  };

  Rng rng(start_seed(config.seed, restart));
  std::vector<std::vector<double>> simplex(dim + 1,
                                           std::vector<double>(dim));
  for (int j = 0; j < p; ++j) simplex[0][j] = rng.uniform01() * kPi;
  for (int j = p; j < dim; ++j) simplex[0][j] = rng.uniform01() * 2.0 * kPi;
  for (int v = 1; v <= dim; ++v) {
    simplex[v] = simplex[0];
    simplex[v][v - 1] += 0.5;
  }

  std::vector<double> values;
  values.reserve(dim + 1);
  const auto budget_left = [&] {
    return out.evaluations < config.max_iterations;
  };
  for (int v = 0; v <= dim && budget_left(); ++v) {
    values.push_back(evaluate(simplex[v]));
  }
  if (values.size() < static_cast<std::size_t>(dim + 1)) {
    out.exhausted = true;
    return out;
  }

  std::vector<std::size_t> order(dim + 1);
  while (budget_left()) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    if (values[order[dim]] - values[order[0]] < config.tolerance) {
      return out;  // converged within budget
    }

    std::vector<double> centroid(dim, 0.0);
    for (int v = 0; v < dim + 1; ++v) {
      if (order[dim] == static_cast<std::size_t>(v)) continue;
      for (int d = 0; d < dim; ++d) centroid[d] += simplex[v][d];
    }
    for (double& c : centroid) c /= dim;
    const std::size_t worst = order[dim];

    const auto blend = [&](double factor) {
      std::vector<double> point(dim);
      for (int d = 0; d < dim; ++d) {
        point[d] = centroid[d] + factor * (simplex[worst][d] - centroid[d]);
      }
      return point;
    };

    const std::vector<double> reflected = blend(-1.0);
    const double f_reflected = evaluate(reflected);
    if (f_reflected < values[order[0]] && budget_left()) {
      const std::vector<double> expanded = blend(-2.0);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[order[dim - 1]]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    if (!budget_left()) break;
    const std::vector<double> contracted = blend(0.5);
    const double f_contracted = evaluate(contracted);
    if (f_contracted < values[worst]) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (int v = 0; v < dim + 1; ++v) {
      if (order[0] == static_cast<std::size_t>(v)) continue;
      for (int d = 0; d < dim; ++d) {
        simplex[v][d] =
            simplex[order[0]][d] + 0.5 * (simplex[v][d] - simplex[order[0]][d]);
      }
      if (!budget_left()) break;
      values[v] = evaluate(simplex[v]);
    }
  }
  out.exhausted = true;
  return out;
}

}  // namespace

Circuit qaoa_ansatz(const IsingModel& model, const std::vector<double>& betas,
                    const std::vector<double>& gammas) {
  if (betas.size() != gammas.size() || betas.empty()) {
    throw std::invalid_argument("need matching, nonempty beta/gamma lists");
  }
  const int n = model.size();
  if (n < 1) throw std::invalid_argument("model must have variables");

  Circuit circuit(n);
  for (int q = 0; q < n; ++q) circuit.h(q);
  for (std::size_t layer = 0; layer < betas.size(); ++layer) {
    const double gamma = gammas[layer];
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double q_ij = model.couplings(i, j);
        if (q_ij == 0.0) continue;
        circuit.cx(i, j);
        circuit.rz(2.0 * gamma * q_ij, j);
        circuit.cx(i, j);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (model.fields(i) == 0.0) continue;
      circuit.rz(2.0 * gamma * model.fields(i), i);
    }
    for (int q = 0; q < n; ++q) circuit.rx(2.0 * betas[layer], q);
  }
  return circuit;
}

double expected_energy(const IsingModel& model,
                       const MeasurementCounts& counts) {
  if (counts.shots < 1 || counts.counts.empty()) {
    throw std::invalid_argument("empty measurement histogram");
  }
  double total = 0.0;
  for (const auto& [key, count] : counts.counts) {
    std::vector<int> spins(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) {
      spins[i] = key[i] == '1' ? -1 : 1;
    }
    total += ising_energy(model, spins) * count;
  }
  return total / counts.shots;
}

QaoaResult qaoa_solve(const QuboTask& task, const QaoaConfig& config) {
  const int n = task.size();
  if (n < 1 || n > StateVector::kMaxQubits) {
    throw std::invalid_argument("variable count outside simulator capacity");
  }
  if (config.depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (config.shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (config.restarts < 1) {
    throw std::invalid_argument("need at least one restart");
  }
  if (config.max_iterations < 1) {
    throw std::invalid_argument("need a positive evaluation budget");
  }
  const IsingModel model = qubo_to_ising(task);

  std::vector<RestartOutcome> outcomes(config.restarts);
#ifdef _OPENMP
  const int workers = std::clamp(config.jobs, 1, config.restarts);
#pragma omp parallel for num_threads(workers) schedule(dynamic) \
    if (workers > 1)
  for (int r = 0; r < config.restarts; ++r) {
    outcomes[r] = run_restart(task, model, config, r);
  }
#else
  for (int r = 0; r < config.restarts; ++r) {
    outcomes[r] = run_restart(task, model, config, r);
  }
#endif

  // Merge in restart order, so the result is identical for any `jobs`.
  QaoaResult result;
  bool has_best = false, has_energy = false;
  for (const RestartOutcome& out : outcomes) {
    result.iterations += out.evaluations;
    result.budget_exhausted = result.budget_exhausted || out.exhausted;
    result.trace.insert(result.trace.end(), out.trace.begin(),
                        out.trace.end());
    if (out.has_best &&
        (!has_best || out.best_objective < result.objective)) {
      result.bits = out.best_bits;
      result.objective = out.best_objective;
      has_best = true;
    }
    if (!out.best_params.empty() &&
        (!has_energy || out.best_energy < result.best_energy)) {
      result.best_energy = out.best_energy;
      result.best_betas.assign(out.best_params.begin(),
                               out.best_params.begin() + config.depth);
      result.best_gammas.assign(out.best_params.begin() + config.depth,
                                out.best_params.end());
      has_energy = true;
    }
  }
  if (!has_best) {
    throw NumericalError("optimizer budget produced no samples");
  }
  return result;
}

}  // namespace qfs
