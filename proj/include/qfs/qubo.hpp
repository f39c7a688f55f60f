#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qfs {

// Quadratic unconstrained binary optimization task:
//   f(x) = xᵀ·quadratic·x + linearᵀ·x + constant,  x ∈ {0,1}ⁿ.
// The quadratic matrix is stored as given (no symmetrization on input).
struct QuboTask {
  Eigen::MatrixXd quadratic;
  Eigen::VectorXd linear;
  double constant = 0.0;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(linear.size()); }
};

// bits[0] is variable x₀ (and reads first in measurement keys).
double qubo_value(const QuboTask& task, const std::vector<int>& bits);

// Ising form  E(z) = Σ_{i<j} Q_ij z_i z_j + Σ_i h_i z_i + offset,  z ∈ {−1,1}ⁿ,
// equivalent to the source QUBO under z_i = 1 − 2·x_i.
struct IsingModel {
  Eigen::MatrixXd couplings;  // upper triangle used
  Eigen::VectorXd fields;
  double offset = 0.0;

  int size() const { return static_cast<int>(fields.size()); }
};

double ising_energy(const IsingModel& model, const std::vector<int>& spins);

IsingModel qubo_to_ising(const QuboTask& task);

// Penalty-form asset-selection objective: pick exactly m of n assets,
//   f(x) = xᵀ(λ2·C + λ3·1ₙₙ)x − (λ1·rᵀ + 2mλ3·1ₙᵀ)x + λ3·m².
QuboTask build_portfolio_qubo(const Eigen::VectorXd& returns,
                              const Eigen::MatrixXd& covariance, int m,
                              double lambda1, double lambda2, double lambda3,
                              std::vector<std::string> labels = {});

struct BruteForceRow {
  std::uint32_t index = 0;  // bits read as a binary number, x₀ most significant
  std::vector<int> bits;
  double objective = 0.0;
  bool feasible = true;
};

struct BruteForceResult {
  std::vector<BruteForceRow> rows;       // all 2ⁿ assignments in index order
  std::size_t best_row = 0;              // lowest feasible objective
};

// Exhaustive enumeration oracle (n ≤ 24). The optional predicate marks rows
// feasible; the optimum is taken over feasible rows only. Throws if no row
// is feasible.
BruteForceResult brute_force(
    const QuboTask& task,
    const std::function<bool(const std::vector<int>&)>& feasible = nullptr);

// Integer portfolio weights w_i = Σ_j x_{ij}·2^j encoded into flat binary
// variables; bit 0 is the least significant bit of each weight.
struct WeightEncoding {
  int num_assets = 0;
  int bits_per_weight = 0;

  int num_variables() const { return num_assets * bits_per_weight; }
  int max_weight() const { return (1 << bits_per_weight) - 1; }
  int variable(int asset, int bit) const;
  int weight(const std::vector<int>& bits, int asset) const;
};

WeightEncoding encode_integer_weights(int num_assets, int bits_per_weight);

// Expands the quadratic weight objective wᵀ·A·w + bᵀ·w + c into a QuboTask
// over the encoding's binary variables.
QuboTask expand_weight_objective(const WeightEncoding& encoding,
                                 const Eigen::MatrixXd& quadratic,
                                 const Eigen::VectorXd& linear,
                                 double constant);

}  // namespace qfs
