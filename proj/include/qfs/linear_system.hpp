#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qfs {

// A (possibly padded or embedded) linear system A·x = b together with the
// bookkeeping needed to read results back in the caller's original basis.
struct LinearSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  bool hermitian = false;
  int original_dim = 0;             // rows that carry meaning (pre-padding)
  std::vector<std::string> labels;  // optional names for the original rows
};

// Mean-variance portfolio balancing inputs: minimize xᵀCx subject to
// Rᵀx = gain and Pᵀx = budget, solved through the KKT conditions.
struct PortfolioSpec {
  Eigen::MatrixXd covariance;
  Eigen::VectorXd returns;
  Eigen::VectorXd prices;
  double gain = 0.0;
  double budget = 0.0;
  std::vector<std::string> labels;
};

// KKT system for the portfolio problem:
//   [ 0  0  Rᵀ ] [η]   [gain  ]
//   [ 0  0  Pᵀ ] [θ] = [budget]
//   [ R  P  C  ] [x]   [0     ]
// padded with identity rows / zero rhs up to the next power of two.
LinearSystem build_portfolio_system(const PortfolioSpec& spec);

// Dilates a non-Hermitian system to [[0, A], [A†, 0]]·(0, x) = (b, 0).
// Hermitian systems are returned unchanged.
LinearSystem hermitian_embed(const LinearSystem& system);

struct ClassicalSolution {
  Eigen::VectorXcd solution;
  std::vector<double> eigenvalues;  // real spectrum; filled when Hermitian
  double condition_number = 0.0;
};

// Direct dense solve used as the reference the quantum solver is checked
// against. Throws NumericalError for singular matrices.
ClassicalSolution classical_solve(const LinearSystem& system);

// Gershgorin row-sum bound on the spectral radius.
double gershgorin_bound(const Eigen::MatrixXcd& matrix);

// Largest |eigenvalue| of a Hermitian matrix (tight spectral bound).
double spectral_bound(const Eigen::MatrixXcd& matrix);

// Smallest power of two that is >= dim (and >= 2).
int padded_dimension(int dim);

}  // namespace qfs
