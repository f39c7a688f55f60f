#include "qfs/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qfs {

namespace {

void validate_indices(int num_qubits, const Instruction& in) {
  if (in.targets.empty()) {
    throw std::invalid_argument("instruction '" + in.label + "' has no target");
  }
  std::vector<int> seen;
  for (int q : in.targets) {
    if (q < 0 || q >= num_qubits) {
      throw std::out_of_range("target qubit out of range in '" + in.label + "'");
    }
    seen.push_back(q);
  }
  for (int q : in.controls) {
    if (q < 0 || q >= num_qubits) {
      throw std::out_of_range("control qubit out of range in '" + in.label + "'");
    }
    seen.push_back(q);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("instruction '" + in.label +
                                "' reuses a qubit index");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) {
    throw std::invalid_argument("circuit needs at least one qubit");
  }
}

void Circuit::add(Instruction instruction) {
  validate_indices(num_qubits_, instruction);
  // Build the matrix once now so unknown labels and wrong parameter counts
  // fail at add time rather than mid-run.
  const GateMatrix gate = standard_gate(instruction.label, instruction.params);
  const int expected = gate.num_qubits() + static_cast<int>(
                           instruction.controls.size());
  const int given = static_cast<int>(instruction.targets.size() +
                                     instruction.controls.size());
  if (expected != given) {
    throw std::invalid_argument("instruction '" + instruction.label +
                                "' expects " + std::to_string(expected) +
                                " qubits, got " + std::to_string(given));
  }
  instructions_.push_back(std::move(instruction));
}

void Circuit::append(const Circuit& other, int offset) {
  if (offset < 0 || offset + other.num_qubits_ > num_qubits_) {
    throw std::out_of_range("appended circuit does not fit the register");
  }
  for (Instruction in : other.instructions_) {
    for (int& q : in.controls) q += offset;
    for (int& q : in.targets) q += offset;
    add(std::move(in));
  }
}

int Circuit::width() const {
  std::vector<int> lane(num_qubits_, 0);
  for (const Instruction& in : instructions_) {
    for (int q : in.controls) ++lane[q];
    for (int q : in.targets) ++lane[q];
  }
  return *std::max_element(lane.begin(), lane.end());
}

std::string Circuit::serialize() const {
  std::ostringstream out;
  out << "qubits " << num_qubits_ << "\n";
  for (const Instruction& in : instructions_) {
    out << in.label;
    if (!in.params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < in.params.size(); ++i) {
        if (i) out << ",";
        out << format_double(in.params[i]);
      }
      out << ")";
    }
    if (!in.controls.empty()) {
      out << " [";
      for (std::size_t i = 0; i < in.controls.size(); ++i) {
        if (i) out << ",";
        out << in.controls[i];
      }
      out << "]";
    }
    for (int q : in.targets) out << " " << q;
    out << "\n";
  }
  return out.str();
}

Circuit Circuit::parse(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  bool have_header = false;
  int num_qubits = 0;
  std::vector<Instruction> parsed;

  while (std::getline(stream, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;  // blank/comment line

    if (!have_header) {
      int n = 0;
      if (head != "qubits" || !(ls >> n)) {
        throw std::invalid_argument("circuit text must start with 'qubits N'");
      }
      num_qubits = n;
      have_header = true;
      continue;
    }

    Instruction in;
    const auto paren = head.find('(');
    if (paren != std::string::npos) {
      if (head.back() != ')') {
        throw std::invalid_argument("malformed parameter list: " + head);
      }
      in.label = head.substr(0, paren);
      std::string body = head.substr(paren + 1, head.size() - paren - 2);
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream ps(body);
      double v = 0.0;
      while (ps >> v) in.params.push_back(v);
      if (!ps.eof()) {
        throw std::invalid_argument("malformed parameter list: " + head);
      }
    } else {
      in.label = head;
    }

    std::string token;
    while (ls >> token) {
      if (token.front() == '[') {
        if (token.back() != ']') {
          throw std::invalid_argument("malformed control list: " + token);
        }
        std::string body = token.substr(1, token.size() - 2);
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream cs(body);
        int q = 0;
        while (cs >> q) in.controls.push_back(q);
      } else {
        in.targets.push_back(std::stoi(token));
      }
    }
    parsed.push_back(std::move(in));
  }
  if (!have_header) {
    throw std::invalid_argument("circuit text must start with 'qubits N'");
  }
  Circuit c(num_qubits);
  for (Instruction& in : parsed) c.add(std::move(in));
  return c;
}

StateVector run(const Circuit& circuit, const StateVector& input) {
  if (input.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("circuit and state register widths differ");
  }
  StateVector state = input;
  for (const Instruction& in : circuit.instructions()) {
    const GateMatrix gate = standard_gate(in.label, in.params);
    state = in.controls.empty()
                ? apply_unitary(state, gate, in.targets)
                : apply_controlled(state, gate, in.controls, in.targets);
  }
  return state;
}

Circuit inverse(const Circuit& circuit) {
  Circuit inv(circuit.num_qubits());
  const auto& ins = circuit.instructions();
  for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
    Instruction in = *it;
    if (in.label == "i" || in.label == "x" || in.label == "y" ||
        in.label == "z" || in.label == "h" || in.label == "swap" ||
        in.label == "cx" || in.label == "cz" || in.label == "ccx" ||
        in.label == "cswap") {
      // self-inverse
    } else if (in.label == "s") {
      in.label = "sdg";
    } else if (in.label == "sdg") {
      in.label = "s";
    } else if (in.label == "t") {
      in.label = "tdg";
    } else if (in.label == "tdg") {
      in.label = "t";
    } else if (in.label == "rx" || in.label == "ry" || in.label == "rz" ||
               in.label == "u1") {
      in.params[0] = -in.params[0];
    } else if (in.label == "rk") {
      // R_k† = diag(1, e^{-2πi/2^k}), expressible as a u1 rotation.
      const double angle = std::ldexp(2.0 * M_PI, -static_cast<int>(in.params[0]));
      in.label = "u1";
      in.params = {-angle};
    } else if (in.label == "u2") {
      // u2(φ,λ)† = u3(-π/2, -λ, -φ)
      in.label = "u3";
      in.params = {-M_PI / 2, -in.params[1], -in.params[0]};
    } else if (in.label == "u3") {
      in.params = {-in.params[0], -in.params[2], -in.params[1]};
    } else {
      throw std::invalid_argument("no inverse mapping for gate '" + in.label +
                                  "'");
    }
    inv.add(std::move(in));
  }
  return inv;
}

}  // namespace qfs
