#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qfs/circuit.hpp"

namespace qfs {

// The 2^n × 2^n angle-transform matrix M with entries
//   M_ij = 2^{-n} · (−1)^{b(j) • g(i)}
// where b(j) is the binary word of the column index, g(i) the Gray code of
// the row index, and • the bitwise dot product mod 2. M maps multiplexed
// rotation angles α to the physical ladder angles θ = M·α; its scaled form
// 2^n·M is a ±1 matrix with mutually orthogonal rows, so M⁻¹ = 2^n·Mᵀ.
Eigen::MatrixXd angle_transform_matrix(int num_controls);

// θ = M·α. Input length must be a power of two.
std::vector<double> transform_angles(const std::vector<double>& alphas);

// Uniformly controlled y-rotation ladder: alternating Ry(θ_i) on `target`
// and CNOTs whose control lines follow the Gray-code ruler sequence. With
// physical angles θ = transform_angles(α), the net action applies Ry(α_v)
// to the target whenever the control qubits (controls[0] = most significant)
// encode the value v. len(thetas) must equal 2^len(controls).
Circuit uniform_controlled_ry(const std::vector<double>& thetas,
                              const std::vector<int>& controls, int target);

// Convenience wrapper taking untransformed multiplex angles α.
Circuit multiplexed_ry(const std::vector<double>& alphas,
                       const std::vector<int>& controls, int target);

// The recursive splitting angles for amplitude encoding: level k (1-based,
// counted from the least significant qubit) holds 2^{n-k} angles
//   α[k-1][j-1] = 2·asin(√(upper-half mass) / √(block mass))
// over consecutive blocks of 2^k amplitudes; 0/0 blocks contribute angle 0.
std::vector<std::vector<double>> rotation_levels(
    const std::vector<double>& amplitudes);

// Circuit preparing |ψ⟩ = Σ √p_i |i⟩ from |0...0⟩: one Ry on qubit 0, then a
// multiplexed Ry per additional qubit. Probabilities must be non-negative,
// sum to 1 within 1e-9, and have power-of-two length. Quantum phases are
// intentionally all zero (only magnitudes are encoded).
Circuit prepare_distribution(const std::vector<double>& probabilities);

}  // namespace qfs
