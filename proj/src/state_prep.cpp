#include "qfs/state_prep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qfs/gray.hpp"

namespace qfs {

namespace {

bool is_power_of_two(std::size_t v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) {
  int n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

// asin with the 0/0 → 0 convention and clamping against rounding overshoot.
double safe_asin_ratio(double numerator, double denominator) {
  if (denominator == 0.0) return 0.0;
  const double r = std::clamp(numerator / denominator, -1.0, 1.0);
  return std::asin(r);
}

}  // namespace

Eigen::MatrixXd angle_transform_matrix(int num_controls) {
  if (num_controls < 1) {
    throw std::invalid_argument("angle transform needs n >= 1");
  }
  const int dim = 1 << num_controls;
  const double scale = 1.0 / dim;
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::uint64_t g = to_gray(static_cast<std::uint64_t>(i));
    for (int j = 0; j < dim; ++j) {
      m(i, j) = gray_dot(static_cast<std::uint64_t>(j), g) ? -scale : scale;
    }
  }
  return m;
}

std::vector<double> transform_angles(const std::vector<double>& alphas) {
  if (!is_power_of_two(alphas.size())) {
    throw std::invalid_argument("angle count must be a power of two");
  }
  const std::size_t dim = alphas.size();
  const double scale = 1.0 / static_cast<double>(dim);
  std::vector<double> thetas(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t g = to_gray(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      acc += gray_dot(j, g) ? -alphas[j] : alphas[j];
    }
    thetas[i] = scale * acc;
  }
  return thetas;
}

Circuit uniform_controlled_ry(const std::vector<double>& thetas,
                              const std::vector<int>& controls, int target) {
  const int k = static_cast<int>(controls.size());
  if (thetas.size() != (std::size_t{1} << k)) {
    throw std::invalid_argument(
        "need exactly 2^num_controls ladder angles");
  }
  int max_q = target;
  for (int c : controls) max_q = std::max(max_q, c);
  Circuit circuit(max_q + 1);

  if (k == 0) {
    circuit.ry(thetas[0], target);
    return circuit;
  }
  // CNOT i sits on the bit where Gray(i) and Gray(i+1) differ — the ruler
  // sequence ctz(i+1) — with the final CNOT wrapping around to the most
  // significant control so the ladder telescopes to the identity when all
  // angles vanish. Counter bit b (LSB = 0) lives on controls[k-1-b].
  const std::size_t count = thetas.size();
  for (std::size_t i = 0; i < count; ++i) {
    circuit.ry(thetas[i], target);
    const int change_bit =
        (i + 1 == count) ? k - 1 : std::countr_zero(i + 1);
    circuit.cx(controls[k - 1 - change_bit], target);
  }
  return circuit;
}

Circuit multiplexed_ry(const std::vector<double>& alphas,
                       const std::vector<int>& controls, int target) {
  return uniform_controlled_ry(transform_angles(alphas), controls, target);
}

std::vector<std::vector<double>> rotation_levels(
    const std::vector<double>& amplitudes) {
  if (!is_power_of_two(amplitudes.size()) || amplitudes.size() < 2) {
    throw std::invalid_argument("amplitude count must be a power of two >= 2");
  }
  const int n = log2_exact(amplitudes.size());
  std::vector<std::vector<double>> levels(n);
  for (int k = 1; k <= n; ++k) {
    const std::size_t block = std::size_t{1} << k;
    const std::size_t half = block >> 1;
    std::vector<double>& row = levels[k - 1];
    row.resize(amplitudes.size() / block);
    for (std::size_t j = 0; j < row.size(); ++j) {
      double upper = 0.0, total = 0.0;
      for (std::size_t l = 0; l < half; ++l) {
        const double a = amplitudes[j * block + half + l];
        upper += a * a;
      }
      for (std::size_t l = 0; l < block; ++l) {
        const double a = amplitudes[j * block + l];
        total += a * a;
      }
      row[j] = 2.0 * safe_asin_ratio(std::sqrt(upper), std::sqrt(total));
    }
  }
  return levels;
}

Circuit prepare_distribution(const std::vector<double>& probabilities) {
  if (!is_power_of_two(probabilities.size()) || probabilities.size() < 2) {
    throw std::invalid_argument(
        "distribution length must be a power of two >= 2");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities must sum to 1");
  }

  const int n = log2_exact(probabilities.size());
  std::vector<double> amplitudes(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    amplitudes[i] = std::sqrt(probabilities[i]);
  }
  const auto levels = rotation_levels(amplitudes);

  // Qubit 0 (most significant) splits the index range in half, so it takes
  // the single top-level angle; each further qubit q refines its block via a
  // multiplexed rotation controlled by qubits 0..q-1.
  Circuit circuit(n);
  circuit.ry(levels[n - 1][0], 0);
  for (int q = 1; q < n; ++q) {
    std::vector<int> controls(q);
    for (int c = 0; c < q; ++c) controls[c] = c;
    const std::vector<double>& alphas = levels[n - 1 - q];
    circuit.append(multiplexed_ry(alphas, controls, q));
  }
  return circuit;
}

}  // namespace qfs
