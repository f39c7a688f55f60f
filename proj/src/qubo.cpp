#include "qfs/qubo.hpp"

#include <cmath>
#include <stdexcept>

namespace qfs {

namespace {

void check_bits(const std::vector<int>& bits, int n, const char* what) {
  if (static_cast<int>(bits.size()) != n) {
    throw std::invalid_argument(std::string(what) + " length mismatch");
  }
}

}  // namespace

double qubo_value(const QuboTask& task, const std::vector<int>& bits) {
  const int n = task.size();
  check_bits(bits, n, "bit vector");
  double value = task.constant;
  for (int i = 0; i < n; ++i) {
    if (!bits[i]) continue;
    value += task.linear(i);
    for (int j = 0; j < n; ++j) {
      if (bits[j]) value += task.quadratic(i, j);
    }
  }
  return value;
}

double ising_energy(const IsingModel& model, const std::vector<int>& spins) {
  const int n = model.size();
  check_bits(spins, n, "spin vector");
  double energy = model.offset;
  for (int i = 0; i < n; ++i) {
    energy += model.fields(i) * spins[i];
    for (int j = i + 1; j < n; ++j) {
      energy += model.couplings(i, j) * spins[i] * spins[j];
    }
  }
  return energy;
}

IsingModel qubo_to_ising(const QuboTask& task) {
  const int n = task.size();
  if (n < 1 || task.quadratic.rows() != n || task.quadratic.cols() != n) {
    throw std::invalid_argument("task dimensions disagree");
  }
  // Substitute x_i = (1 - z_i)/2 after folding x_i² = x_i into the linear
  // part and symmetrizing cross terms into s_ij = a_ij + a_ji.
  IsingModel model;
  model.couplings = Eigen::MatrixXd::Zero(n, n);
  model.fields = Eigen::VectorXd::Zero(n);
  model.offset = task.constant;
  for (int i = 0; i < n; ++i) {
    const double bi = task.linear(i) + task.quadratic(i, i);
    model.fields(i) -= bi / 2.0;
    model.offset += bi / 2.0;
    for (int j = i + 1; j < n; ++j) {
      const double s = task.quadratic(i, j) + task.quadratic(j, i);
      model.couplings(i, j) = s / 4.0;
      model.fields(i) -= s / 4.0;
      model.fields(j) -= s / 4.0;
      model.offset += s / 4.0;
    }
  }
  return model;
}

QuboTask build_portfolio_qubo(const Eigen::VectorXd& returns,
                              const Eigen::MatrixXd& covariance, int m,
                              double lambda1, double lambda2, double lambda3,
                              std::vector<std::string> labels) {
  const int n = static_cast<int>(returns.size());
  if (n < 1 || covariance.rows() != n || covariance.cols() != n) {
    throw std::invalid_argument(
        "returns and covariance dimensions must agree");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  if (m < 0 || m > n) {
    throw std::invalid_argument("target asset count must be in [0, n]");
  }
  QuboTask task;
  task.quadratic = lambda2 * covariance +
                   lambda3 * Eigen::MatrixXd::Ones(n, n);
  task.linear = -(lambda1 * returns +
                  2.0 * m * lambda3 * Eigen::VectorXd::Ones(n));
  task.constant = lambda3 * static_cast<double>(m) * m;
  task.labels = std::move(labels);
  return task;
}

BruteForceResult brute_force(
    const QuboTask& task,
    const std::function<bool(const std::vector<int>&)>& feasible) {
  const int n = task.size();
  if (n < 1 || n > 24) {
    throw std::invalid_argument("brute force supports 1..24 variables");
  }
  BruteForceResult result;
  result.rows.reserve(std::size_t{1} << n);
  bool have_best = false;
  for (std::uint32_t index = 0; index < (std::uint32_t{1} << n); ++index) {
    BruteForceRow row;
    row.index = index;
    row.bits.resize(n);
    for (int q = 0; q < n; ++q) row.bits[q] = (index >> (n - 1 - q)) & 1;
    row.objective = qubo_value(task, row.bits);
    row.feasible = !feasible || feasible(row.bits);
    if (row.feasible &&
        (!have_best ||
         row.objective < result.rows[result.best_row].objective)) {
      result.best_row = index;
      have_best = true;
    }
    result.rows.push_back(std::move(row));
  }
  if (!have_best) {
    throw std::invalid_argument("no bitstring satisfies the feasibility rule");
  }
  return result;
}

int WeightEncoding::variable(int asset, int bit) const {
  if (asset < 0 || asset >= num_assets || bit < 0 || bit >= bits_per_weight) {
    throw std::invalid_argument("asset/bit index out of range");
  }
  return asset * bits_per_weight + bit;
}

int WeightEncoding::weight(const std::vector<int>& bits, int asset) const {
  if (static_cast<int>(bits.size()) != num_variables()) {
    throw std::invalid_argument("bit vector length mismatch");
  }
  int w = 0;
  for (int j = 0; j < bits_per_weight; ++j) {
    if (bits[variable(asset, j)]) w += 1 << j;
  }
  return w;
}

WeightEncoding encode_integer_weights(int num_assets, int bits_per_weight) {
  if (num_assets < 1 || bits_per_weight < 1) {
    throw std::invalid_argument("need at least one asset and one bit");
  }
  if (num_assets * bits_per_weight > 24) {
    throw std::invalid_argument("weight encoding exceeds variable capacity");
  }
  return WeightEncoding{num_assets, bits_per_weight};
}

QuboTask expand_weight_objective(const WeightEncoding& encoding,
                                 const Eigen::MatrixXd& quadratic,
                                 const Eigen::VectorXd& linear,
                                 double constant) {
  const int n = encoding.num_assets;
  const int m = encoding.bits_per_weight;
  if (quadratic.rows() != n || quadratic.cols() != n || linear.size() != n) {
    throw std::invalid_argument("objective dimensions must match the assets");
  }
  const int nv = encoding.num_variables();
  QuboTask task;
  task.quadratic = Eigen::MatrixXd::Zero(nv, nv);
  task.linear = Eigen::VectorXd::Zero(nv);
  task.constant = constant;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int v = encoding.variable(i, j);
      task.linear(v) += linear(i) * std::ldexp(1.0, j);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < m; ++l) {
          task.quadratic(v, encoding.variable(k, l)) +=
              quadratic(i, k) * std::ldexp(1.0, j + l);
        }
      }
    }
  }
  return task;
}

}  // namespace qfs
