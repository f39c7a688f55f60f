#pragma once

#include <cstdint>
#include <vector>

#include "qfs/circuit.hpp"
#include "qfs/qubo.hpp"

namespace qfs {

struct QaoaConfig {
  int depth = 1;               // ansatz layers p
  int shots = 1024;            // samples per energy evaluation
  std::uint64_t seed = 1;      // master seed (restart/evaluation streams
                               // derive from it, so results are independent
                               // of how many worker threads run restarts)
  int max_iterations = 150;    // energy evaluations per restart
  double tolerance = 1e-3;     // simplex spread convergence threshold
  int restarts = 3;            // independent optimizer starts
  int jobs = 1;                // worker threads across restarts
};

struct QaoaTracePoint {
  int restart = 0;
  int evaluation = 0;          // evaluation index within the restart
  std::vector<double> betas;
  std::vector<double> gammas;
  double energy = 0.0;         // sampled expected Ising energy
};

struct QaoaResult {
  std::vector<int> bits;       // best objective bitstring ever sampled
  double objective = 0.0;      // its QUBO value
  int iterations = 0;          // total energy evaluations across restarts
  bool budget_exhausted = false;
  std::vector<double> best_betas;
  std::vector<double> best_gammas;
  double best_energy = 0.0;    // lowest sampled energy seen
  std::vector<QaoaTracePoint> trace;
};

// Layered ansatz: H on all qubits, then per layer the coupling blocks
// CNOT(i,j)·Rz(2γQ_ij)(j)·CNOT(i,j), the field rotations Rz(2γh_i)(i), and
// the mixer Rx(2β) on every qubit. Zero coefficients emit no gates.
Circuit qaoa_ansatz(const IsingModel& model, const std::vector<double>& betas,
                    const std::vector<double>& gammas);

// Frequency-weighted average Ising energy of a measurement histogram.
double expected_energy(const IsingModel& model,
                       const MeasurementCounts& counts);

// Hybrid loop: seeded-restart Nelder-Mead over (β, γ) minimizing the sampled
// expected energy; the answer is the best-objective bitstring observed in any
// evaluation's samples, never just the final distribution's mode.
QaoaResult qaoa_solve(const QuboTask& task, const QaoaConfig& config);

}  // namespace qfs
