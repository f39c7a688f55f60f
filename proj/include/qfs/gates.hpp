#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qfs {

// Dense unitary acting on log2(dim) qubits. Row/column index bits follow the
// same convention as StateVector: bit 0 of the index space (most significant)
// belongs to the first qubit the gate is applied to.
struct GateMatrix {
  int dim = 0;                              // power of two
  std::vector<std::complex<double>> entries;  // row-major dim x dim
  std::string label;

  std::complex<double>& at(int row, int col) { return entries[row * dim + col]; }
  const std::complex<double>& at(int row, int col) const {
    return entries[row * dim + col];
  }
  int num_qubits() const;
};

// Canonical gate set. Fixed gates: "i", "x", "y", "z", "sx" (square root of
// X), "h", "s", "sdg", "t", "tdg", "cx", "cz", "swap", "ccx", "cswap".
// Parametric (angles in radians): "rx", "ry", "rz" (one angle), "u1" (λ),
// "u2" (φ, λ), "u3" (θ, φ, λ), and "rk" (one integer-valued parameter k ≥ 1,
// diag(1, e^{2πi/2^k})). Unknown names or wrong parameter counts throw
// std::invalid_argument.
GateMatrix standard_gate(const std::string& name,
                         const std::vector<double>& params = {});

// Phase gate R_k = diag(1, e^{2πi/2^k}); equals u1(2π/2^k). k=1 is Z, k=2 is
// S, k=3 is T.
GateMatrix rk_gate(int k);

// Kronecker product a ⊗ b (order preserved; non-commutative).
GateMatrix tensor(const GateMatrix& a, const GateMatrix& b);

// Adds `num_controls` control qubits in front: block-diagonal [[I, 0], [0, g]]
// iterated. controlled(X,1) = CNOT, controlled(X,2) = CCNOT.
GateMatrix controlled(const GateMatrix& gate, int num_controls);

// Conjugate transpose.
GateMatrix adjoint(const GateMatrix& gate);

// True iff max |G·G† − I| < 1e-10.
bool check_unitary(const GateMatrix& gate);

// True iff a = e^{iφ}·b for some real φ, entrywise within `tol`.
bool equal_up_to_global_phase(const GateMatrix& a, const GateMatrix& b,
                              double tol = 1e-10);

// Builds a GateMatrix from an explicit (row-major) entry list; validates
// unitarity. Used for numerically computed evolution operators.
GateMatrix gate_from_entries(int dim, std::vector<std::complex<double>> entries,
                             const std::string& label);

}  // namespace qfs
