#pragma once

#include <vector>

#include "vqsde/statevector.h"

namespace vqsde {

enum class GateKind {
  X,
  Y,
  Z,
  H,
  RY,     // exp(-i angle Y / 2)
  Phase,  // diag(1, e^{i angle})
};

/// A single gate: one target, any number of |1>-controls. Common compound
/// gates are expressed through controls: CNOT is X with one control, Toffoli
/// is X with two, and CnZ (phase flip on |1...1>) is Z controlled on all
/// remaining qubits.
struct Gate {
  GateKind kind;
  int target;
  std::vector<int> controls;
  double angle = 0.0;

  static Gate x(int t) { return {GateKind::X, t, {}}; }
  static Gate y(int t) { return {GateKind::Y, t, {}}; }
  static Gate z(int t) { return {GateKind::Z, t, {}}; }
  static Gate h(int t) { return {GateKind::H, t, {}}; }
  static Gate ry(int t, double angle) { return {GateKind::RY, t, {}, angle}; }
  static Gate phase(int t, double angle) {
    return {GateKind::Phase, t, {}, angle};
  }
  static Gate cnot(int control, int t) { return {GateKind::X, t, {control}}; }
  static Gate toffoli(int c0, int c1, int t) {
    return {GateKind::X, t, {c0, c1}};
  }
  /// Phase -1 on the all-ones state of qubits [0, n).
  static Gate cnz(int n_qubits);

  Gate adjoint() const;
};

/// Ordered gate list; gates are applied front to back.
class Circuit {
public:
  explicit Circuit(int n_qubits, std::vector<Gate> gates = {});

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  void append(Gate g);
  void append(const Circuit& other);

  /// Inverse circuit: gates reversed and individually inverted.
  Circuit adjoint() const;

  /// Same circuit with every gate given an extra control qubit. Targets are
  /// left untouched; callers embed into a larger register via shift().
  Circuit controlled_on(int control) const;

  /// Shift all qubit indices by `offset` and re-home on `n_qubits` qubits.
  Circuit shifted(int offset, int n_qubits) const;

private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

/// U_circuit |state>; preserves the norm.
StateVector apply_circuit(const StateVector& state, const Circuit& circuit);

/// Dense matrix of the circuit, column by column.
CMatrix circuit_to_dense(const Circuit& circuit);

}  // namespace vqsde
