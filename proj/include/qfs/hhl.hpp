#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfs/linear_system.hpp"
#include "qfs/state_vector.hpp"

namespace qfs {

// Result of a quantum linear-system solve. `solution` is the normalized
// solution state (padded dimension); callers trim padding rows themselves.
struct HhlResult {
  std::vector<cplx> solution;
  double ancilla_probability = 0.0;  // P(ancilla = 1) before post-selection
  double branch_probability = 0.0;   // P(ancilla = 1 and phase register = 0)
  int t = 0;                         // phase-register width in qubits
  double time_scale = 0.0;           // tau in U = e^{iA tau}
  std::string backend;               // "exact" or "sampled"
  int shots = 0;
  std::uint64_t seed = 0;
};

struct HhlOptions {
  int t = 4;                 // phase-register qubits
  double time_scale = 0.0;   // 0 = choose automatically from the spectrum
  bool sampled = false;
  int shots = 8192;
  std::uint64_t seed = 1;
  double c_factor = 0.9;     // inversion constant as a fraction of the
                             // smallest representable |eigenvalue|
};

// Largest evolution time that keeps every |eigenvalue|·tau/(2pi) strictly
// inside the signed phase window [-1/2, 1/2): tau = 2pi(2^(t-1)-1)/(2^t·L)
// with L the spectral bound of the matrix.
double auto_time_scale(const Eigen::MatrixXcd& matrix, int t);

// Phase estimation + eigenvalue-inversion solver. The phase register is read
// in two's complement, so negative eigenvalues are supported. Throws
// std::invalid_argument for non-Hermitian input or capacity overflow, and
// NumericalError when post-selection probability falls below 1e-6.
HhlResult hhl_solve(const LinearSystem& system, const HhlOptions& options);

// Fixed hand-built 5-qubit circuit (4 qubits used) solving
// [[1.5, 0.5], [0.5, 1.5]]·x = (cos theta, sin theta) with a 2-qubit phase
// register and inversion angle parameter r = 2.65.
HhlResult hhl_2x2_reference(double theta, bool sampled = false,
                            int shots = 8192, std::uint64_t seed = 1);

// |x_index| of the normalized solution, via exact overlap or a swap test
// against the X-gate-prepared basis state.
double extract_component(const HhlResult& result, int index,
                         bool sampled = false, int shots = 8192,
                         std::uint64_t seed = 1);

// |<x_opt|x_current>| via swap test (or exact inner product).
double portfolio_similarity(const HhlResult& result,
                            const std::vector<cplx>& current,
                            bool sampled = false, int shots = 8192,
                            std::uint64_t seed = 1);

namespace detail {
// Forward phase estimation only (no inversion, no uncompute): returns the
// phase-register probability distribution for input vector b.
std::vector<double> phase_estimation_probabilities(
    const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& b, int t,
    double time_scale);
}  // namespace detail

}  // namespace qfs
