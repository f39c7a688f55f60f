#include "qfs/qft.hpp"

#include <stdexcept>

namespace qfs {

Circuit qft(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("qft needs n >= 1");
  Circuit c(num_qubits);
  // Qubit j carries place value 2^{n-1-j} of the input integer; an H on it
  // followed by R_{k-j+1} rotations conditioned on the lower-place qubits
  // produces the phase-encoded output with the register in reversed order,
  // which the final swaps undo.
  for (int j = 0; j < num_qubits; ++j) {
    c.h(j);
    for (int k = j + 1; k < num_qubits; ++k) {
      c.crk(k - j + 1, k, j);
    }
  }
  for (int j = 0; j < num_qubits / 2; ++j) {
    c.swap(j, num_qubits - 1 - j);
  }
  return c;
}

Circuit inverse_qft(int num_qubits) {
  return inverse(qft(num_qubits));
}

}  // namespace qfs
