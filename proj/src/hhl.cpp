#include "qfs/hhl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfs/circuit.hpp"
#include "qfs/qft.hpp"
#include "qfs/swap_test.hpp"

namespace qfs {

namespace {

constexpr double kPi = std::numbers::pi;

int log2_exact(std::size_t dim) {
  int s = 0;
  while ((std::size_t{1} << s) < dim) ++s;
  if ((std::size_t{1} << s) != dim || dim < 2) {
    throw std::invalid_argument("dimension must be a power of two >= 2");
  }
  return s;
}

// U^p = V diag(e^{i lambda tau p}) V† assembled from the eigendecomposition;
// numerically exact up to the orthonormality error of V.
GateMatrix evolution_gate(const Eigen::MatrixXcd& vectors,
                          const Eigen::VectorXd& values, double tau) {
  const int d = static_cast<int>(vectors.rows());
  Eigen::VectorXcd phases(d);
  for (int k = 0; k < d; ++k) {
    phases(k) = std::exp(cplx(0.0, values(k) * tau));
  }
  const Eigen::MatrixXcd u = vectors * phases.asDiagonal() * vectors.adjoint();
  std::vector<cplx> entries(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) entries[r * d + c] = u(r, c);
  }
  return gate_from_entries(d, entries, "expm");
}

// Rotate a unit vector's global phase so its largest-magnitude component is
// real and positive (deterministic representative of the physical ray).
void align_phase(std::vector<cplx>& v) {
  std::size_t arg_max = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg_max])) arg_max = i;
  }
  const double mag = std::abs(v[arg_max]);
  if (mag == 0.0) return;
  const cplx rot = std::conj(v[arg_max]) / mag;
  for (cplx& a : v) a *= rot;
}

struct PhaseEstimationSetup {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd values;
  int s = 0;  // solution-register qubits
};

PhaseEstimationSetup decompose(const Eigen::MatrixXcd& matrix) {
  const int d = static_cast<int>(matrix.rows());
  if (d < 2 || matrix.cols() != d) {
    throw std::invalid_argument("matrix must be square with dimension >= 2");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("matrix must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed");
  }
  PhaseEstimationSetup setup;
  setup.vectors = es.eigenvectors();
  setup.values = es.eigenvalues();
  setup.s = log2_exact(static_cast<std::size_t>(d));
  return setup;
}

void check_time_scale(const PhaseEstimationSetup& setup, double tau, int t) {
  const double max_abs = setup.values.cwiseAbs().maxCoeff();
  // Signed two's-complement phase window: every eigenvalue must land in
  // [-1/2, 1/2) turns, otherwise the register aliases.
  if (max_abs * tau / (2.0 * kPi) >= 0.5) {
    throw std::invalid_argument(
        "time scale too large: an eigenvalue phase leaves [-1/2, 1/2)");
  }
  if (t < 2) throw std::invalid_argument("phase register needs t >= 2");
}

// Forward phase estimation onto `state` (phase register at qubits [0, t),
// solution register right after it). Set `forward` false for the uncompute.
StateVector run_phase_estimation(StateVector state,
                                 const PhaseEstimationSetup& setup, int t,
                                 double tau, bool forward) {
  const GateMatrix h = standard_gate("h");
  std::vector<int> sol_targets(setup.s);
  for (int q = 0; q < setup.s; ++q) sol_targets[q] = t + q;

  const auto controlled_powers = [&](double sign) {
    for (int j = 0; j < t; ++j) {
      const double power = std::ldexp(1.0, t - 1 - j);
      state = apply_controlled(
          state, evolution_gate(setup.vectors, setup.values, sign * tau * power),
          {j}, sol_targets);
    }
  };

  Circuit transform(state.num_qubits());
  if (forward) {
    for (int j = 0; j < t; ++j) state = apply_unitary(state, h, {j});
    controlled_powers(1.0);
    transform.append(inverse_qft(t), 0);
    state = run(transform, state);
  } else {
    transform.append(qft(t), 0);
    state = run(transform, state);
    controlled_powers(-1.0);
    for (int j = 0; j < t; ++j) state = apply_unitary(state, h, {j});
  }
  return state;
}

}  // namespace

double auto_time_scale(const Eigen::MatrixXcd& matrix, int t) {
  if (t < 2) throw std::invalid_argument("phase register needs t >= 2");
  const double bound = spectral_bound(matrix);
  if (bound <= 0.0) {
    throw NumericalError("matrix has empty spectrum; no admissible time scale");
  }
  return 2.0 * kPi * (std::ldexp(1.0, t - 1) - 1.0) /
         (std::ldexp(1.0, t) * bound);
}

HhlResult hhl_solve(const LinearSystem& system, const HhlOptions& options) {
  const PhaseEstimationSetup setup = decompose(system.matrix);
  const int dim = static_cast<int>(system.matrix.rows());
  if (system.rhs.size() != dim) {
    throw std::invalid_argument("rhs length must match the matrix dimension");
  }
  const int t = options.t;
  const double tau = options.time_scale > 0.0
                         ? options.time_scale
                         : auto_time_scale(system.matrix, t);
  check_time_scale(setup, tau, t);
  const int total = t + setup.s + 1;
  if (total > StateVector::kMaxQubits) {
    throw std::invalid_argument("register capacity exceeded");
  }

  const double b_norm = system.rhs.norm();
  if (b_norm <= 0.0) throw std::invalid_argument("rhs must be nonzero");

  // Register layout: [phase t][solution s][ancilla 1]; qubit 0 is the MSB of
  // the basis index, so |phase=0, sol=i, anc=0> sits at global index 2i.
  std::vector<cplx> init(std::size_t{1} << total, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) {
    init[static_cast<std::size_t>(2) * i] = system.rhs(i) / b_norm;
  }
  StateVector state = StateVector::from_amplitudes(total, std::move(init));

  state = run_phase_estimation(std::move(state), setup, t, tau, true);

  // Eigenvalue-inversion rotations, multiplexed on the phase-register value
  // m read in two's complement.
  const std::size_t n_phase = std::size_t{1} << t;
  const double lambda_unit = 2.0 * kPi / (tau * static_cast<double>(n_phase));
  const double c_const = options.c_factor * lambda_unit;
  std::vector<int> phase_controls(t);
  for (int j = 0; j < t; ++j) phase_controls[j] = j;
  const int ancilla = t + setup.s;
  for (std::size_t m = 1; m < n_phase; ++m) {
    const double m_signed = (m >= n_phase / 2)
                                ? static_cast<double>(m) - n_phase
                                : static_cast<double>(m);
    const double lambda = lambda_unit * m_signed;
    const double theta = 2.0 * std::asin(c_const / lambda);
    state = apply_controlled_on_value(state, standard_gate("ry", {theta}),
                                      phase_controls, m, {ancilla});
  }

  state = run_phase_estimation(std::move(state), setup, t, tau, false);

  HhlResult result;
  result.t = t;
  result.time_scale = tau;
  result.backend = options.sampled ? "sampled" : "exact";
  result.shots = options.sampled ? options.shots : 0;
  result.seed = options.seed;
  result.ancilla_probability = marginal_probability(state, ancilla, 1);
  if (result.ancilla_probability < 1e-6) {
    throw NumericalError("post-selection probability below 1e-6");
  }

  if (!options.sampled) {
    std::vector<cplx> branch(dim);
    double p_branch = 0.0;
    for (int i = 0; i < dim; ++i) {
      branch[i] = state.amplitude(static_cast<std::size_t>(2) * i + 1);
      p_branch += std::norm(branch[i]);
    }
    if (p_branch < 1e-6) {
      throw NumericalError("post-selection probability below 1e-6");
    }
    const double inv = 1.0 / std::sqrt(p_branch);
    for (cplx& a : branch) a *= inv;
    align_phase(branch);
    result.branch_probability = p_branch;
    result.solution = std::move(branch);
    return result;
  }

  if (options.shots < 1) {
    throw std::invalid_argument("sampled mode needs shots >= 1");
  }
  const MeasurementCounts counts = sample(state, options.shots, options.seed);
  std::vector<long> branch_counts(dim, 0);
  long anc_ones = 0, branch_total = 0;
  for (const auto& [key, count] : counts.counts) {
    if (key[ancilla] == '1') anc_ones += count;
    if (key.compare(0, t, std::string(t, '0')) != 0) continue;
    if (key[ancilla] != '1') continue;
    std::size_t sol = 0;
    for (int q = 0; q < setup.s; ++q) {
      sol = sol * 2 + (key[t + q] == '1' ? 1 : 0);
    }
    branch_counts[sol] += count;
    branch_total += count;
  }
  result.ancilla_probability = static_cast<double>(anc_ones) / options.shots;
  if (branch_total == 0) {
    throw NumericalError("no post-selected samples; increase shots");
  }
  result.branch_probability =
      static_cast<double>(branch_total) / options.shots;
  result.solution.resize(dim);
  for (int i = 0; i < dim; ++i) {
    result.solution[i] =
        std::sqrt(static_cast<double>(branch_counts[i]) / branch_total);
  }
  return result;
}

HhlResult hhl_2x2_reference(double theta, bool sampled, int shots,
                            std::uint64_t seed) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw std::invalid_argument("theta must lie in (0, pi/2)");
  }
  // Fixed decomposition for A = [[1.5, 0.5], [0.5, 1.5]] (eigenvalues 1, 2),
  // r = 2.65 inversion angles; qubits: 0,1 phase register, 2 solution,
  // 3 ancilla, 4 idle spectator.
  const double r = 2.65;
  Circuit c(5);
  c.h(0);
  c.h(1);
  c.ry(2.0 * theta, 2);  // prepares b = (cos theta, sin theta)
  c.u1(3.0 * kPi / 2.0, 0);
  c.crx(-kPi, 0, 2);
  c.u1(3.0 * kPi / 4.0, 1);
  c.crx(-kPi / 2.0, 1, 2);
  // 2-qubit inverse QFT on the phase register
  c.swap(0, 1);
  c.h(1);
  c.cu1(-kPi / 2.0, 0, 1);
  c.h(0);
  // eigenvalue inversion
  c.swap(0, 1);
  c.cry(2.0 * kPi / std::pow(2.0, r), 0, 3);
  c.cry(kPi / std::pow(2.0, r), 1, 3);
  c.swap(0, 1);
  // uncompute
  c.h(0);
  c.cu1(kPi / 2.0, 0, 1);
  c.h(1);
  c.swap(0, 1);
  c.crx(kPi / 2.0, 1, 2);
  c.u1(-3.0 * kPi / 4.0, 1);
  c.crx(kPi, 0, 2);
  c.u1(-3.0 * kPi / 2.0, 0);
  c.h(0);
  c.h(1);

  const StateVector state = run(c, zero_state(5));

  HhlResult result;
  result.t = 2;
  result.time_scale = kPi / 2.0;  // e^{iA pi/2} maps eigenvalues 1,2 to m=1,2
  result.backend = sampled ? "sampled" : "exact";
  result.shots = sampled ? shots : 0;
  result.seed = seed;
  result.ancilla_probability = marginal_probability(state, 3, 1);

  // Solution branch: phase register 00, ancilla 1, spectator 0 -> basis
  // indices 00010 (x0) and 00110 (x1).
  if (!sampled) {
    const double p0 = std::norm(state.amplitude(2));
    const double p1 = std::norm(state.amplitude(6));
    const double p_sel = p0 + p1;
    if (p_sel < 1e-6) {
      throw NumericalError("post-selection probability below 1e-6");
    }
    result.branch_probability = p_sel;
    result.solution = {std::sqrt(p0 / p_sel), std::sqrt(p1 / p_sel)};
    return result;
  }

  if (shots < 1) throw std::invalid_argument("sampled mode needs shots >= 1");
  const MeasurementCounts counts = sample(state, shots, seed);
  long n0 = 0, n1 = 0, anc_ones = 0;
  for (const auto& [key, count] : counts.counts) {
    if (key[3] == '1') anc_ones += count;
    if (key == "00010") n0 += count;
    if (key == "00110") n1 += count;
  }
  result.ancilla_probability = static_cast<double>(anc_ones) / shots;
  const long branch_total = n0 + n1;
  if (branch_total == 0) {
    throw NumericalError("no post-selected samples; increase shots");
  }
  result.branch_probability = static_cast<double>(branch_total) / shots;
  result.solution = {
      std::sqrt(static_cast<double>(n0) / branch_total),
      std::sqrt(static_cast<double>(n1) / branch_total)};
  return result;
}

double extract_component(const HhlResult& result, int index, bool sampled,
                         int shots, std::uint64_t seed) {
  const int dim = static_cast<int>(result.solution.size());
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("component index out of range");
  }
  if (!sampled) return std::abs(result.solution[index]);

  const int n = log2_exact(static_cast<std::size_t>(dim));
  const StateVector psi = StateVector::from_amplitudes(n, result.solution);
  // Basis state |index> prepared with X gates only.
  Circuit prep(n);
  for (int q = 0; q < n; ++q) {
    if ((index >> (n - 1 - q)) & 1) prep.x(q);
  }
  const StateVector phi = run(prep, zero_state(n));
  return swap_test(psi, phi, shots, seed);
}

double portfolio_similarity(const HhlResult& result,
                            const std::vector<cplx>& current, bool sampled,
                            int shots, std::uint64_t seed) {
  if (current.size() != result.solution.size()) {
    throw std::invalid_argument("portfolio dimension mismatch");
  }
  if (!sampled) {
    cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < current.size(); ++i) {
      overlap += std::conj(result.solution[i]) * current[i];
    }
    return std::abs(overlap);
  }
  const int n = log2_exact(current.size());
  const StateVector psi = StateVector::from_amplitudes(n, result.solution);
  const StateVector phi = StateVector::from_amplitudes(n, current);
  return swap_test(psi, phi, shots, seed);
}

namespace detail {

std::vector<double> phase_estimation_probabilities(
    const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& b, int t,
    double time_scale) {
  const PhaseEstimationSetup setup = decompose(matrix);
  if (b.size() != matrix.rows()) {
    throw std::invalid_argument("vector length must match the matrix");
  }
  check_time_scale(setup, time_scale, t);
  const int total = t + setup.s;
  if (total > StateVector::kMaxQubits) {
    throw std::invalid_argument("register capacity exceeded");
  }
  const double b_norm = b.norm();
  if (b_norm <= 0.0) throw std::invalid_argument("vector must be nonzero");

  std::vector<cplx> init(std::size_t{1} << total, cplx(0.0, 0.0));
  for (int i = 0; i < matrix.rows(); ++i) init[i] = b(i) / b_norm;
  StateVector state = StateVector::from_amplitudes(total, std::move(init));
  state = run_phase_estimation(std::move(state), setup, t, time_scale, true);

  const std::size_t n_sol = std::size_t{1} << setup.s;
  std::vector<double> register_probs(std::size_t{1} << t, 0.0);
  for (std::size_t m = 0; m < register_probs.size(); ++m) {
    for (std::size_t i = 0; i < n_sol; ++i) {
      register_probs[m] += std::norm(state.amplitude(m * n_sol + i));
    }
  }
  return register_probs;
}

}  // namespace detail

}  // namespace qfs
