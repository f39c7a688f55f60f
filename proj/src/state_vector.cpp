#include "qfs/state_vector.hpp"

#include <algorithm>
#include <cmath>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

// Shared argument validation for the gate-application entry points.
void validate_application(int num_qubits, const GateMatrix& gate,
                          const std::vector<int>& controls,
                          const std::vector<int>& targets) {
  const std::size_t k = targets.size();
  if (k == 0) throw std::invalid_argument("gate needs at least one target");
  if (gate.dim != (1 << k)) {
    throw std::invalid_argument("gate dimension " + std::to_string(gate.dim) +
                                " does not match " + std::to_string(k) +
                                " target qubit(s)");
  }
  std::vector<int> seen;
  for (int q : targets) {
    if (q < 0 || q >= num_qubits) throw std::out_of_range("target qubit out of range");
    seen.push_back(q);
  }
  for (int q : controls) {
    if (q < 0 || q >= num_qubits) throw std::out_of_range("control qubit out of range");
    seen.push_back(q);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("control/target qubits must be distinct");
  }
  if (!check_unitary(gate)) {
    throw std::invalid_argument("gate '" + gate.label +
                                "' failed the unitarity check");
  }
}

std::string to_bitstring(std::uint64_t index, int num_qubits) {
  std::string s(num_qubits, '0');
  for (int q = 0; q < num_qubits; ++q) {
    if ((index >> (num_qubits - 1 - q)) & 1ULL) s[q] = '1';
  }
  return s;
}

}  // namespace

namespace kernels {

void apply(std::vector<cplx>& amps, int num_qubits, const GateMatrix& gate,
           const std::vector<int>& controls, std::uint64_t control_value,
           const std::vector<int>& targets) {
  const int n = num_qubits;
  const int k = static_cast<int>(targets.size());
  const int d = gate.dim;

  std::uint64_t cmask = 0, cval = 0;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const std::uint64_t bit = 1ULL << (n - 1 - controls[i]);
    cmask |= bit;
    if ((control_value >> (controls.size() - 1 - i)) & 1ULL) cval |= bit;
  }
  std::uint64_t tbits = 0;
  std::vector<std::uint64_t> tmask(k);
  for (int i = 0; i < k; ++i) {
    tmask[i] = 1ULL << (n - 1 - targets[i]);
    tbits |= tmask[i];
  }
  // Index offset contributed by gate-row j: bit i of j (from the most
  // significant side) lands on targets[i].
  std::vector<std::uint64_t> toff(d, 0);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < k; ++i) {
      if ((j >> (k - 1 - i)) & 1) toff[j] |= tmask[i];
    }
  }
  std::vector<int> free_pos;
  for (int pos = 0; pos < n; ++pos) {
    if (!((1ULL << pos) & (cmask | tbits))) free_pos.push_back(pos);
  }
  const std::int64_t groups = std::int64_t{1} << free_pos.size();
  const cplx* u = gate.entries.data();
  const int num_free = static_cast<int>(free_pos.size());

  // Each group touches a disjoint set of amplitudes, so the loop is purely
  // element-wise and bit-identical under any thread count.
#pragma omp parallel for schedule(static) if (groups >= 4096)
  for (std::int64_t r = 0; r < groups; ++r) {
    std::uint64_t base = cval;
    for (int i = 0; i < num_free; ++i) {
      base |= ((static_cast<std::uint64_t>(r) >> i) & 1ULL) << free_pos[i];
    }
    cplx stack_buf[64];
    std::vector<cplx> heap_buf;
    cplx* in = stack_buf;
    if (d > 64) {
      heap_buf.resize(d);
      in = heap_buf.data();
    }
    for (int j = 0; j < d; ++j) in[j] = amps[base | toff[j]];
    for (int row = 0; row < d; ++row) {
      cplx acc{0.0, 0.0};
      const cplx* urow = u + static_cast<std::size_t>(row) * d;
      for (int j = 0; j < d; ++j) acc += urow[j] * in[j];
      amps[base | toff[row]] = acc;
    }
  }
}

}  // namespace kernels

namespace reference {

// Plain serial implementation with an independent indexing scheme: each
// output amplitude gathers its row of the embedded operator directly. Kept
// as the oracle for kernels::apply and as the benchmark baseline.
void apply(std::vector<cplx>& amps, int num_qubits, const GateMatrix& gate,
           const std::vector<int>& controls, std::uint64_t control_value,
           const std::vector<int>& targets) {
  const int n = num_qubits;
  const int k = static_cast<int>(targets.size());
  const int d = gate.dim;

  std::uint64_t cmask = 0, cval = 0;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const std::uint64_t bit = 1ULL << (n - 1 - controls[i]);
    cmask |= bit;
    if ((control_value >> (controls.size() - 1 - i)) & 1ULL) cval |= bit;
  }

  std::vector<cplx> out(amps.size());
  for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
    if ((idx & cmask) != cval) {
      out[idx] = amps[idx];
      continue;
    }
    int row = 0;
    for (int i = 0; i < k; ++i) {
      row = (row << 1) |
            static_cast<int>((idx >> (n - 1 - targets[i])) & 1ULL);
    }
    cplx acc{0.0, 0.0};
    for (int j = 0; j < d; ++j) {
      std::uint64_t src = idx;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t bit = 1ULL << (n - 1 - targets[i]);
        if ((j >> (k - 1 - i)) & 1) {
          src |= bit;
        } else {
          src &= ~bit;
        }
      }
      acc += gate.at(row, j) * amps[src];
    }
    out[idx] = acc;
  }
  amps.swap(out);
}

}  // namespace reference

double StateVector::norm() const {
  double n2 = 0.0;
  for (const cplx& a : amps_) n2 += std::norm(a);
  return std::sqrt(n2);
}

void StateVector::finalize() {
  const double n = norm();
  // Renormalize only on real drift; small drift is left visible so that
  // accumulating errors surface in tests instead of being papered over.
  if (std::abs(n - 1.0) > 1e-9) {
    const double inv = 1.0 / n;
    for (cplx& a : amps_) a *= inv;
    ++renorm_count_;
  }
}

StateVector StateVector::from_amplitudes(int num_qubits,
                                         std::vector<cplx> amps) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::out_of_range("qubit count out of range");
  }
  if (amps.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^num_qubits");
  }
  StateVector s(num_qubits, std::move(amps));
  const double n = s.norm();
  if (std::abs(n - 1.0) > 1e-9) {
    throw std::invalid_argument("amplitudes are not normalized");
  }
  const double inv = 1.0 / n;
  for (cplx& a : s.amps_) a *= inv;
  return s;
}

StateVector zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > StateVector::kMaxQubits) {
    throw std::out_of_range("qubit count must be in [1, " +
                            std::to_string(StateVector::kMaxQubits) + "]");
  }
  std::vector<cplx> amps(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
  amps[0] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector apply_unitary(const StateVector& state, const GateMatrix& gate,
                          const std::vector<int>& targets) {
  validate_application(state.num_qubits_, gate, {}, targets);
  StateVector out = state;
  kernels::apply(out.amps_, out.num_qubits_, gate, {}, 0, targets);
  out.finalize();
  return out;
}

StateVector apply_controlled(const StateVector& state, const GateMatrix& gate,
                             const std::vector<int>& controls,
                             const std::vector<int>& targets) {
  validate_application(state.num_qubits_, gate, controls, targets);
  const std::uint64_t all_ones = (controls.size() >= 64)
                                     ? ~0ULL
                                     : ((1ULL << controls.size()) - 1);
  StateVector out = state;
  kernels::apply(out.amps_, out.num_qubits_, gate, controls, all_ones,
                 targets);
  out.finalize();
  return out;
}

StateVector apply_controlled_on_value(const StateVector& state,
                                      const GateMatrix& gate,
                                      const std::vector<int>& controls,
                                      std::uint64_t value,
                                      const std::vector<int>& targets) {
  validate_application(state.num_qubits_, gate, controls, targets);
  if (!controls.empty() && value >> controls.size()) {
    throw std::out_of_range("control value does not fit the control register");
  }
  StateVector out = state;
  kernels::apply(out.amps_, out.num_qubits_, gate, controls, value, targets);
  out.finalize();
  return out;
}

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p(state.dim());
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
  return p;
}

MeasurementCounts sample(const StateVector& state, int shots,
                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const std::vector<double> p = probabilities(state);
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cum[i] = acc;
  }
  const double total = cum.back();

  MeasurementCounts result;
  result.shots = shots;
  result.seed = seed;
  result.num_qubits = state.num_qubits();
  Rng rng(seed);
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(it - cum.begin(), p.size() - 1);
    ++result.counts[to_bitstring(idx, state.num_qubits())];
  }
  return result;
}

double marginal_probability(const StateVector& state, int qubit, int value) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::out_of_range("qubit index out of range");
  }
  if (value != 0 && value != 1) {
    throw std::invalid_argument("measured value must be 0 or 1");
  }
  const std::uint64_t bit = 1ULL << (state.num_qubits() - 1 - qubit);
  const auto& amps = state.amplitudes();
  double p = 0.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (static_cast<int>((i & bit) != 0) == value) p += std::norm(amps[i]);
  }
  return p;
}

std::pair<StateVector, double> post_select(const StateVector& state, int qubit,
                                           int value) {
  const double p = marginal_probability(state, qubit, value);
  if (p < 1e-12) {
    throw NumericalError("post-selection on a zero-probability branch");
  }
  const std::uint64_t bit = 1ULL << (state.num_qubits() - 1 - qubit);
  const double inv = 1.0 / std::sqrt(p);
  std::vector<cplx> amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (static_cast<int>((i & bit) != 0) == value) {
      amps[i] *= inv;
    } else {
      amps[i] = cplx{0.0, 0.0};
    }
  }
  StateVector out(state.num_qubits(), std::move(amps));
  out.finalize();
  return {out, p};
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  const int n = a.num_qubits() + b.num_qubits();
  if (n > StateVector::kMaxQubits) {
    throw std::out_of_range("tensor product exceeds the qubit capacity");
  }
  std::vector<cplx> amps(std::size_t{1} << n);
  const auto& aa = a.amplitudes();
  const auto& bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) {
    for (std::size_t j = 0; j < bb.size(); ++j) {
      amps[i * bb.size() + j] = aa[i] * bb[j];
    }
  }
  StateVector out(n, std::move(amps));
  out.finalize();
  return out;
}

}  // namespace qfs
