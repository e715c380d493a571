#include "vqsde/circuit.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vqsde {

namespace {

void check_gate(const Gate& g, int n_qubits) {
  auto in_range = [n_qubits](int q) { return q >= 0 && q < n_qubits; };
  if (!in_range(g.target)) {
    throw std::out_of_range("Gate: target qubit out of range");
  }
  for (int c : g.controls) {
    if (!in_range(c)) {
      throw std::out_of_range("Gate: control qubit out of range");
    }
    if (c == g.target) {
      throw std::invalid_argument("Gate: control coincides with target");
    }
  }
}

}  // namespace

Gate Gate::cnz(int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("cnz: need at least one qubit");
  }
  Gate g = Gate::z(n_qubits - 1);
  for (int q = 0; q < n_qubits - 1; ++q) {
    g.controls.push_back(q);
  }
  return g;
}

Gate Gate::adjoint() const {
  Gate g = *this;
  if (kind == GateKind::RY || kind == GateKind::Phase) {
    g.angle = -angle;
  }
  return g;
}

Circuit::Circuit(int n_qubits, std::vector<Gate> gates)
    : n_qubits_(n_qubits), gates_(std::move(gates)) {
  if (n_qubits < 1) {
    throw std::invalid_argument("Circuit: n_qubits must be positive");
  }
  for (const Gate& g : gates_) {
    check_gate(g, n_qubits_);
  }
}

void Circuit::append(Gate g) {
  check_gate(g, n_qubits_);
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("Circuit::append: qubit count mismatch");
  }
  for (const Gate& g : other.gates_) {
    gates_.push_back(g);
  }
}

Circuit Circuit::adjoint() const {
  std::vector<Gate> inv;
  inv.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    inv.push_back(it->adjoint());
  }
  return Circuit(n_qubits_, std::move(inv));
}

Circuit Circuit::controlled_on(int control) const {
  std::vector<Gate> out;
  out.reserve(gates_.size());
  for (Gate g : gates_) {
    g.controls.push_back(control);
    out.push_back(std::move(g));
  }
  Circuit c(n_qubits_ > control ? n_qubits_ : control + 1, {});
  for (Gate& g : out) {
    c.append(std::move(g));
  }
  return c;
}

Circuit Circuit::shifted(int offset, int n_qubits) const {
  Circuit out(n_qubits);
  for (Gate g : gates_) {
    g.target += offset;
    for (int& c : g.controls) {
      c += offset;
    }
    out.append(std::move(g));
  }
  return out;
}

namespace {

// Qubit 0 is the MSB: bit position of qubit q in an n-qubit index is n-1-q.
inline std::int64_t qubit_bit(int n_qubits, int q) {
  return std::int64_t{1} << (n_qubits - 1 - q);
}

void apply_gate(CVector& amps, int n_qubits, const Gate& g) {
  const std::int64_t dim = amps.size();
  const std::int64_t tbit = qubit_bit(n_qubits, g.target);
  std::int64_t cmask = 0;
  for (int c : g.controls) {
    cmask |= qubit_bit(n_qubits, c);
  }

  switch (g.kind) {
    case GateKind::Z:
    case GateKind::Phase: {
      const Complex factor = g.kind == GateKind::Z
                                 ? Complex(-1.0, 0.0)
                                 : std::exp(Complex(0.0, g.angle));
      for (std::int64_t i = 0; i < dim; ++i) {
        if ((i & tbit) && (i & cmask) == cmask) {
          amps[i] *= factor;
        }
      }
      return;
    }
    default:
      break;
  }

  // 2x2 block update on (i, i|tbit) pairs.
  Complex m00, m01, m10, m11;
  switch (g.kind) {
    case GateKind::X:
      m00 = 0, m01 = 1, m10 = 1, m11 = 0;
      break;
    case GateKind::Y:
      m00 = 0, m01 = Complex(0, -1), m10 = Complex(0, 1), m11 = 0;
      break;
    case GateKind::H: {
      const double s = 1.0 / std::sqrt(2.0);
      m00 = s, m01 = s, m10 = s, m11 = -s;
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      m00 = c, m01 = -s, m10 = s, m11 = c;
      break;
    }
    default:
      throw std::logic_error("apply_gate: unhandled kind");
  }
  for (std::int64_t i = 0; i < dim; ++i) {
    if ((i & tbit) || (i & cmask) != cmask) {
      continue;
    }
    const std::int64_t j = i | tbit;
    const Complex a0 = amps[i], a1 = amps[j];
    amps[i] = m00 * a0 + m01 * a1;
    amps[j] = m10 * a0 + m11 * a1;
  }
}

}  // namespace

StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
  if (state.n_qubits() != circuit.n_qubits()) {
    throw std::invalid_argument("apply_circuit: dimension mismatch");
  }
  CVector amps = state.amplitudes();
  for (const Gate& g : circuit.gates()) {
    apply_gate(amps, circuit.n_qubits(), g);
  }
  return StateVector(state.n_qubits(), std::move(amps));
}

CMatrix circuit_to_dense(const Circuit& circuit) {
  const std::int64_t dim = std::int64_t{1} << circuit.n_qubits();
  CMatrix m(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    StateVector col =
        apply_circuit(StateVector::basis_state(circuit.n_qubits(), j), circuit);
    m.col(j) = col.amplitudes();
  }
  return m;
}

}  // namespace vqsde
