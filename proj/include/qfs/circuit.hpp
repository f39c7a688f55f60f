#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfs/state_vector.hpp"

namespace qfs {

// One gate application: `label`/`params` name a gate from the canonical set
// (see gates.hpp), applied to `targets`, conditioned on every qubit in
// `controls` being 1. Multi-qubit named gates such as "cx" may also be used
// directly, in which case their leading qubit(s) act as controls through the
// matrix itself.
struct Instruction {
  std::string label;
  std::vector<double> params;
  std::vector<int> controls;
  std::vector<int> targets;
};

// Ordered gate list over a fixed register width.
class Circuit {
 public:
  explicit Circuit(int num_qubits);

  void add(Instruction instruction);

  // Appends every instruction of `other`, with qubit indices shifted by
  // `offset`, so sub-circuits (QFT blocks, rotation ladders, ...) compose
  // into larger registers.
  void append(const Circuit& other, int offset = 0);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::size_t gate_count() const { return instructions_.size(); }

  // Maximum number of instructions touching any single qubit lane, counting
  // control involvement.
  int width() const;

  // Line-oriented text form: a "qubits N" header, then one instruction per
  // line as label(params) [controls] targets. parse() round-trips it.
  std::string serialize() const;
  static Circuit parse(const std::string& text);

  // Convenience builders.
  void i(int q) { add({"i", {}, {}, {q}}); }
  void x(int q) { add({"x", {}, {}, {q}}); }
  void y(int q) { add({"y", {}, {}, {q}}); }
  void z(int q) { add({"z", {}, {}, {q}}); }
  void h(int q) { add({"h", {}, {}, {q}}); }
  void s(int q) { add({"s", {}, {}, {q}}); }
  void sdg(int q) { add({"sdg", {}, {}, {q}}); }
  void t(int q) { add({"t", {}, {}, {q}}); }
  void tdg(int q) { add({"tdg", {}, {}, {q}}); }
  void sx(int q) { add({"sx", {}, {}, {q}}); }
  void rx(double angle, int q) { add({"rx", {angle}, {}, {q}}); }
  void ry(double angle, int q) { add({"ry", {angle}, {}, {q}}); }
  void rz(double angle, int q) { add({"rz", {angle}, {}, {q}}); }
  void u1(double lambda, int q) { add({"u1", {lambda}, {}, {q}}); }
  void u2(double phi, double lambda, int q) { add({"u2", {phi, lambda}, {}, {q}}); }
  void u3(double theta, double phi, double lambda, int q) {
    add({"u3", {theta, phi, lambda}, {}, {q}});
  }
  void swap(int a, int b) { add({"swap", {}, {}, {a, b}}); }
  void cx(int control, int target) { add({"x", {}, {control}, {target}}); }
  void cz(int control, int target) { add({"z", {}, {control}, {target}}); }
  void ccx(int c1, int c2, int target) { add({"x", {}, {c1, c2}, {target}}); }
  void cswap(int control, int a, int b) { add({"swap", {}, {control}, {a, b}}); }
  void crx(double angle, int control, int target) {
    add({"rx", {angle}, {control}, {target}});
  }
  void cry(double angle, int control, int target) {
    add({"ry", {angle}, {control}, {target}});
  }
  void cu1(double lambda, int control, int target) {
    add({"u1", {lambda}, {control}, {target}});
  }
  void crk(int k, int control, int target) {
    add({"rk", {static_cast<double>(k)}, {control}, {target}});
  }

 private:
  int num_qubits_ = 0;
  std::vector<Instruction> instructions_;
};

// Executes the circuit on `input` (register widths must match).
StateVector run(const Circuit& circuit, const StateVector& input);

// Circuit implementing the adjoint: reversed instruction order with each
// gate replaced by its inverse. Supports every gate emitted by the library's
// circuit builders; throws std::invalid_argument for gates without a named
// inverse mapping ("sx").
Circuit inverse(const Circuit& circuit);

}  // namespace qfs
