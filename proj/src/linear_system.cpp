#include "qfs/linear_system.hpp"

#include <cmath>
#include <stdexcept>

#include "qfs/state_vector.hpp"  // NumericalError

namespace qfs {

namespace {

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

int padded_dimension(int dim) {
  int p = 2;
  while (p < dim) p *= 2;
  return p;
}

LinearSystem build_portfolio_system(const PortfolioSpec& spec) {
  const int n = static_cast<int>(spec.covariance.rows());
  if (n < 1 || spec.covariance.cols() != n) {
    throw std::invalid_argument("covariance must be square and non-empty");
  }
  if (spec.returns.size() != n || spec.prices.size() != n) {
    throw std::invalid_argument(
        "returns and prices must match the covariance dimension");
  }
  if ((spec.covariance - spec.covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-9) {
    throw std::invalid_argument("covariance must be symmetric");
  }

  const int dim = n + 2;
  const int padded = padded_dimension(dim);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(padded, padded);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(padded);
  for (int j = 0; j < n; ++j) {
    m(0, 2 + j) = spec.returns(j);
    m(2 + j, 0) = spec.returns(j);
    m(1, 2 + j) = spec.prices(j);
    m(2 + j, 1) = spec.prices(j);
    for (int i = 0; i < n; ++i) m(2 + i, 2 + j) = spec.covariance(i, j);
  }
  for (int i = dim; i < padded; ++i) m(i, i) = 1.0;  // inert padding rows
  b(0) = spec.gain;
  b(1) = spec.budget;

  LinearSystem sys;
  sys.matrix = std::move(m);
  sys.rhs = std::move(b);
  sys.hermitian = true;
  sys.original_dim = dim;
  sys.labels.push_back("return-multiplier");
  sys.labels.push_back("budget-multiplier");
  for (int i = 0; i < n; ++i) {
    sys.labels.push_back(static_cast<std::size_t>(i) < spec.labels.size()
                             ? spec.labels[i]
                             : "asset" + std::to_string(i));
  }
  return sys;
}

LinearSystem hermitian_embed(const LinearSystem& system) {
  const int d = static_cast<int>(system.matrix.rows());
  if (d < 1 || system.matrix.cols() != d || system.rhs.size() != d) {
    throw std::invalid_argument("system matrix/rhs dimensions disagree");
  }
  if (system.hermitian || is_hermitian(system.matrix)) {
    LinearSystem copy = system;
    copy.hermitian = true;
    return copy;
  }
  LinearSystem embedded;
  embedded.matrix = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  embedded.matrix.topRightCorner(d, d) = system.matrix;
  embedded.matrix.bottomLeftCorner(d, d) = system.matrix.adjoint();
  embedded.rhs = Eigen::VectorXcd::Zero(2 * d);
  embedded.rhs.head(d) = system.rhs;
  embedded.hermitian = true;
  embedded.original_dim = system.original_dim > 0 ? system.original_dim : d;
  embedded.labels = system.labels;
  return embedded;
}

ClassicalSolution classical_solve(const LinearSystem& system) {
  const int d = static_cast<int>(system.matrix.rows());
  if (d < 1 || system.matrix.cols() != d || system.rhs.size() != d) {
    throw std::invalid_argument("system matrix/rhs dimensions disagree");
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(system.matrix);
  if (!lu.isInvertible()) {
    throw NumericalError("linear system is singular");
  }

  ClassicalSolution out;
  out.solution = lu.solve(system.rhs);

  if (system.hermitian || is_hermitian(system.matrix)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(system.matrix);
    if (es.info() != Eigen::Success) {
      throw NumericalError("eigendecomposition failed");
    }
    double max_abs = 0.0, min_abs = 0.0;
    for (int i = 0; i < d; ++i) {
      const double v = es.eigenvalues()(i);
      out.eigenvalues.push_back(v);
      const double a = std::abs(v);
      max_abs = std::max(max_abs, a);
      min_abs = (i == 0) ? a : std::min(min_abs, a);
    }
    out.condition_number = max_abs / min_abs;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system.matrix);
    const auto& sv = svd.singularValues();
    out.condition_number = sv(0) / sv(sv.size() - 1);
  }
  return out;
}

double gershgorin_bound(const Eigen::MatrixXcd& matrix) {
  double bound = 0.0;
  for (int i = 0; i < matrix.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < matrix.cols(); ++j) row += std::abs(matrix(i, j));
    bound = std::max(bound, row);
  }
  return bound;
}

double spectral_bound(const Eigen::MatrixXcd& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace qfs
