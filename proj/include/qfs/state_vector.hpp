#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfs/gates.hpp"

namespace qfs {

using cplx = std::complex<double>;

// Thrown for runtime numerical failures (zero-probability post-selection,
// singular systems, ...) as opposed to malformed-input errors, so callers
// can map the two classes to distinct process exit codes.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense statevector of an n-qubit register.
//
// Bit ordering: qubit 0 is the MOST significant bit of the basis index, so
// for a 3-qubit register |5⟩ = |101⟩ means qubit 0 = 1, qubit 1 = 0,
// qubit 2 = 1, and bitstring keys read left to right as qubit 0..n-1.
// Every public operation returns a value whose Euclidean norm is 1 within
// 1e-12; drift beyond 1e-9 triggers an explicit renormalization (counted,
// so silent error accumulation is observable) rather than a hidden rescale.
class StateVector {
 public:
  static constexpr int kMaxQubits = 20;

  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t i) const { return amps_.at(i); }
  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  double norm() const;
  int renormalization_count() const { return renorm_count_; }

  // Builds a state from explicit amplitudes (must be unit norm within 1e-9;
  // exact small drift is corrected). Used for injecting arbitrary complex
  // right-hand sides where no preparation circuit is required.
  static StateVector from_amplitudes(int num_qubits, std::vector<cplx> amps);

 private:
  StateVector(int num_qubits, std::vector<cplx> amps)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {}

  void finalize();  // norm-drift policy

  int num_qubits_ = 0;
  std::vector<cplx> amps_;
  int renorm_count_ = 0;

  friend StateVector zero_state(int);
  friend StateVector apply_unitary(const StateVector&, const GateMatrix&,
                                   const std::vector<int>&);
  friend StateVector apply_controlled(const StateVector&, const GateMatrix&,
                                      const std::vector<int>&,
                                      const std::vector<int>&);
  friend StateVector apply_controlled_on_value(const StateVector&,
                                               const GateMatrix&,
                                               const std::vector<int>&,
                                               std::uint64_t,
                                               const std::vector<int>&);
  friend std::pair<StateVector, double> post_select(const StateVector&, int,
                                                    int);
  friend StateVector tensor_product(const StateVector&, const StateVector&);
};

// Measurement outcome histogram. Keys are bitstrings in qubit-0-first
// (most significant bit first) order; counts sum to `shots`.
struct MeasurementCounts {
  std::map<std::string, int> counts;
  int shots = 0;
  std::uint64_t seed = 0;
  int num_qubits = 0;
};

// |0...0⟩ on n qubits. n must be in [1, StateVector::kMaxQubits].
StateVector zero_state(int num_qubits);

// Applies `gate` to the listed target qubits (identity elsewhere). Targets
// are ordered: targets[0] is the most significant bit of the gate's own
// index space. The gate must pass the unitarity check.
StateVector apply_unitary(const StateVector& state, const GateMatrix& gate,
                          const std::vector<int>& targets);

// Applies `gate` on the subspace where every control qubit is 1.
StateVector apply_controlled(const StateVector& state, const GateMatrix& gate,
                             const std::vector<int>& controls,
                             const std::vector<int>& targets);

// Applies `gate` on the subspace where the control qubits spell out `value`
// (controls[0] carrying the most significant bit of `value`). This is the
// multiplexed-gate primitive used by eigenvalue-inversion rotations and as
// the semantic oracle for uniformly controlled rotation ladders.
StateVector apply_controlled_on_value(const StateVector& state,
                                      const GateMatrix& gate,
                                      const std::vector<int>& controls,
                                      std::uint64_t value,
                                      const std::vector<int>& targets);

// p_i = |amplitude_i|^2 for every basis index.
std::vector<double> probabilities(const StateVector& state);

// Draws `shots` i.i.d. basis-state measurements with the seeded generator.
// Identical (state, shots, seed) triples produce identical counts.
MeasurementCounts sample(const StateVector& state, int shots,
                         std::uint64_t seed);

// Probability that measuring `qubit` yields `value` (0 or 1).
double marginal_probability(const StateVector& state, int qubit, int value);

// Collapses `qubit` to `value`, returning the renormalized conditional state
// (same register width) and the selection probability. Throws NumericalError
// if the branch probability is below 1e-12.
std::pair<StateVector, double> post_select(const StateVector& state, int qubit,
                                           int value);

// |a⟩⊗|b⟩; qubits of `a` come first (most significant side).
StateVector tensor_product(const StateVector& a, const StateVector& b);

// Gate-application kernels. `apply` is the production implementation
// (OpenMP-parallel over amplitude groups; element-wise only, so results are
// bit-identical for any thread count). `reference::apply` is a deliberately
// plain serial re-implementation with an independent indexing scheme, kept
// as an oracle for the parallel kernels and as the benchmark baseline.
// `control_value` holds one bit per control (controls[0] = most significant);
// pass all-ones for conventional controls, and an empty control list for
// unconditional application.
namespace kernels {
void apply(std::vector<cplx>& amps, int num_qubits, const GateMatrix& gate,
           const std::vector<int>& controls, std::uint64_t control_value,
           const std::vector<int>& targets);
}
namespace reference {
void apply(std::vector<cplx>& amps, int num_qubits, const GateMatrix& gate,
           const std::vector<int>& controls, std::uint64_t control_value,
           const std::vector<int>& targets);
}

}  // namespace qfs
