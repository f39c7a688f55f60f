#include "qfs/gates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qfs {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

GateMatrix make(int dim, std::vector<cd> entries, std::string label) {
  return GateMatrix{dim, std::move(entries), std::move(label)};
}

std::string format_label(const std::string& name,
                         const std::vector<double>& params) {
  if (params.empty()) return name;
  std::string label = name + "(";
  char buf[32];
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", params[i]);
    if (i) label += ",";
    label += buf;
  }
  return label + ")";
}

void expect_params(const std::string& name, const std::vector<double>& params,
                   std::size_t count) {
  if (params.size() != count) {
    throw std::invalid_argument("gate '" + name + "' expects " +
                                std::to_string(count) + " parameter(s), got " +
                                std::to_string(params.size()));
  }
}

}  // namespace

int GateMatrix::num_qubits() const {
  int n = 0;
  while ((1 << n) < dim) ++n;
  return n;
}

GateMatrix standard_gate(const std::string& name,
                         const std::vector<double>& params) {
  const double isq2 = 1.0 / std::sqrt(2.0);
  const std::string label = format_label(name, params);

  if (name == "i") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, 1}, label);
  }
  if (name == "x") {
    expect_params(name, params, 0);
    return make(2, {0, 1, 1, 0}, label);
  }
  if (name == "y") {
    expect_params(name, params, 0);
    return make(2, {0, -kI, kI, 0}, label);
  }
  if (name == "z") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, -1}, label);
  }
  if (name == "sx") {
    expect_params(name, params, 0);
    return make(2,
                {0.5 * cd{1, 1}, 0.5 * cd{1, -1}, 0.5 * cd{1, -1},
                 0.5 * cd{1, 1}},
                label);
  }
  if (name == "h") {
    expect_params(name, params, 0);
    return make(2, {isq2, isq2, isq2, -isq2}, label);
  }
  if (name == "s") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, kI}, label);
  }
  if (name == "sdg") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, -kI}, label);
  }
  if (name == "t") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, std::exp(kI * (M_PI / 4))}, label);
  }
  if (name == "tdg") {
    expect_params(name, params, 0);
    return make(2, {1, 0, 0, std::exp(-kI * (M_PI / 4))}, label);
  }
  if (name == "rx") {
    expect_params(name, params, 1);
    const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
    return make(2, {c, -kI * s, -kI * s, c}, label);
  }
  if (name == "ry") {
    expect_params(name, params, 1);
    const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
    return make(2, {c, -s, s, c}, label);
  }
  if (name == "rz") {
    expect_params(name, params, 1);
    return make(2,
                {std::exp(-kI * (params[0] / 2)), 0, 0,
                 std::exp(kI * (params[0] / 2))},
                label);
  }
  if (name == "u1") {
    expect_params(name, params, 1);
    return make(2, {1, 0, 0, std::exp(kI * params[0])}, label);
  }
  if (name == "u2") {
    expect_params(name, params, 2);
    const double phi = params[0], lam = params[1];
    return make(2,
                {isq2, -isq2 * std::exp(kI * lam), isq2 * std::exp(kI * phi),
                 isq2 * std::exp(kI * (phi + lam))},
                label);
  }
  if (name == "u3") {
    expect_params(name, params, 3);
    const double th = params[0], phi = params[1], lam = params[2];
    const double c = std::cos(th / 2), s = std::sin(th / 2);
    return make(2,
                {c, -std::exp(kI * lam) * s, std::exp(kI * phi) * s,
                 std::exp(kI * (phi + lam)) * c},
                label);
  }
  if (name == "rk") {
    expect_params(name, params, 1);
    const int k = static_cast<int>(params[0]);
    if (k < 1 || static_cast<double>(k) != params[0]) {
      throw std::invalid_argument("rk gate requires an integer k >= 1");
    }
    GateMatrix g = rk_gate(k);
    g.label = label;
    return g;
  }
  if (name == "cx") {
    expect_params(name, params, 0);
    return controlled(standard_gate("x"), 1);
  }
  if (name == "cz") {
    expect_params(name, params, 0);
    return controlled(standard_gate("z"), 1);
  }
  if (name == "swap") {
    expect_params(name, params, 0);
    return make(4,
                {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1},
                label);
  }
  if (name == "ccx") {
    expect_params(name, params, 0);
    return controlled(standard_gate("x"), 2);
  }
  if (name == "cswap") {
    expect_params(name, params, 0);
    return controlled(standard_gate("swap"), 1);
  }
  throw std::invalid_argument("unknown gate name '" + name + "'");
}

GateMatrix rk_gate(int k) {
  if (k < 1) throw std::invalid_argument("rk gate requires k >= 1");
  // 2π/2^k evaluated with ldexp to stay exact for large k.
  const double angle = std::ldexp(2.0 * M_PI, -k);
  return make(2, {1, 0, 0, std::exp(kI * angle)},
              "rk(" + std::to_string(k) + ")");
}

GateMatrix tensor(const GateMatrix& a, const GateMatrix& b) {
  GateMatrix out;
  out.dim = a.dim * b.dim;
  out.entries.assign(static_cast<std::size_t>(out.dim) * out.dim, cd{0, 0});
  out.label = a.label + "⊗" + b.label;
  for (int ar = 0; ar < a.dim; ++ar)
    for (int ac = 0; ac < a.dim; ++ac)
      for (int br = 0; br < b.dim; ++br)
        for (int bc = 0; bc < b.dim; ++bc)
          out.at(ar * b.dim + br, ac * b.dim + bc) = a.at(ar, ac) * b.at(br, bc);
  return out;
}

GateMatrix controlled(const GateMatrix& gate, int num_controls) {
  if (num_controls < 1) {
    throw std::invalid_argument("controlled() requires num_controls >= 1");
  }
  GateMatrix cur = gate;
  for (int c = 0; c < num_controls; ++c) {
    GateMatrix next;
    next.dim = cur.dim * 2;
    next.entries.assign(static_cast<std::size_t>(next.dim) * next.dim,
                        cd{0, 0});
    for (int i = 0; i < cur.dim; ++i) next.at(i, i) = 1.0;
    for (int r = 0; r < cur.dim; ++r)
      for (int col = 0; col < cur.dim; ++col)
        next.at(cur.dim + r, cur.dim + col) = cur.at(r, col);
    next.label = "c" + cur.label;
    cur = std::move(next);
  }
  return cur;
}

GateMatrix adjoint(const GateMatrix& gate) {
  GateMatrix out;
  out.dim = gate.dim;
  out.entries.resize(gate.entries.size());
  out.label = gate.label + "†";
  for (int r = 0; r < gate.dim; ++r)
    for (int c = 0; c < gate.dim; ++c)
      out.at(r, c) = std::conj(gate.at(c, r));
  return out;
}

bool check_unitary(const GateMatrix& gate) {
  if (gate.dim <= 0 ||
      gate.entries.size() != static_cast<std::size_t>(gate.dim) * gate.dim) {
    return false;
  }
  double max_err = 0.0;
  for (int r = 0; r < gate.dim; ++r) {
    for (int c = 0; c < gate.dim; ++c) {
      cd acc{0, 0};
      for (int k = 0; k < gate.dim; ++k) {
        acc += gate.at(r, k) * std::conj(gate.at(c, k));
      }
      if (r == c) acc -= 1.0;
      max_err = std::max(max_err, std::abs(acc));
    }
  }
  return max_err < 1e-10;
}

bool equal_up_to_global_phase(const GateMatrix& a, const GateMatrix& b,
                              double tol) {
  if (a.dim != b.dim) return false;
  // Phase factor from the largest entry of b, then entrywise comparison.
  std::size_t ref = 0;
  for (std::size_t i = 0; i < b.entries.size(); ++i) {
    if (std::abs(b.entries[i]) > std::abs(b.entries[ref])) ref = i;
  }
  if (std::abs(b.entries[ref]) < tol) return false;
  const cd phase = a.entries[ref] / b.entries[ref];
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (std::abs(a.entries[i] - phase * b.entries[i]) > tol) return false;
  }
  return true;
}

GateMatrix gate_from_entries(int dim, std::vector<cd> entries,
                             const std::string& label) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("gate dimension must be a power of two");
  }
  if (entries.size() != static_cast<std::size_t>(dim) * dim) {
    throw std::invalid_argument("gate entry count does not match dimension");
  }
  GateMatrix g{dim, std::move(entries), label};
  if (!check_unitary(g)) {
    throw std::invalid_argument("gate '" + label + "' is not unitary");
  }
  return g;
}

}  // namespace qfs
