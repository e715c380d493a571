#include "vqsde/unitary_sum.h"

#include <stdexcept>

namespace vqsde {

UnitarySum::UnitarySum(int n_qubits, std::vector<UnitaryTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits < 1) {
    throw std::invalid_argument("UnitarySum: n_qubits must be positive");
  }
  for (const UnitaryTerm& t : terms_) {
    if (t.circuit.n_qubits() != n_qubits_) {
      throw std::invalid_argument("UnitarySum: term qubit count mismatch");
    }
  }
}

void UnitarySum::append(Complex coefficient, Circuit circuit) {
  if (circuit.n_qubits() != n_qubits_) {
    throw std::invalid_argument("UnitarySum::append: qubit count mismatch");
  }
  terms_.push_back({coefficient, std::move(circuit)});
}

void UnitarySum::append(const UnitarySum& other) {
  for (const UnitaryTerm& t : other.terms_) {
    append(t.coefficient, t.circuit);
  }
}

std::size_t UnitarySum::gate_count() const {
  std::size_t n = 0;
  for (const UnitaryTerm& t : terms_) {
    n += t.circuit.gates().size();
  }
  return n;
}

StateVector apply_unitary_sum(const StateVector& state, const UnitarySum& op) {
  if (state.n_qubits() != op.n_qubits()) {
    throw std::invalid_argument("apply_unitary_sum: dimension mismatch");
  }
  if (op.terms().empty()) {
    throw std::invalid_argument("apply_unitary_sum: empty term list");
  }
  CVector out = CVector::Zero(state.dim());
  for (const UnitaryTerm& t : op.terms()) {
    out += t.coefficient * apply_circuit(state, t.circuit).amplitudes();
  }
  return StateVector(state.n_qubits(), std::move(out));
}

CMatrix unitary_sum_to_dense(const UnitarySum& op, int max_qubits) {
  if (op.n_qubits() > max_qubits) {
    throw std::invalid_argument("unitary_sum_to_dense: qubit cap exceeded");
  }
  const std::int64_t dim = std::int64_t{1} << op.n_qubits();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const UnitaryTerm& t : op.terms()) {
    m += t.coefficient * circuit_to_dense(t.circuit);
  }
  return m;
}

}  // namespace vqsde
