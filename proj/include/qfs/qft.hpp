#pragma once

#include "qfs/circuit.hpp"

namespace qfs {

// Quantum Fourier transform on n qubits:
//   |x⟩ ↦ (1/√2^n) Σ_k e^{2πi·x·k/2^n} |k⟩
// built from Hadamards and controlled R_k phase gates, with the terminal
// qubit-reversal swaps included so the definitional formula holds verbatim
// in this library's most-significant-bit-first ordering.
Circuit qft(int num_qubits);

// Inverse transform: reversed gate order with negated rotation angles, so
// run(inverse_qft(n), run(qft(n), ψ)) = ψ.
Circuit inverse_qft(int num_qubits);

}  // namespace qfs
