#pragma once

#include <vector>

#include "vqsde/circuit.h"

namespace vqsde {

/// One weighted unitary term of a sum-of-unitaries operator.
struct UnitaryTerm {
  Complex coefficient;
  Circuit circuit;
};

/// Non-unitary operator represented as sum_k lambda_k U_k with each U_k a
/// quantum circuit. The common currency between the generator, the
/// variational stepper, and the payoff observables.
class UnitarySum {
public:
  explicit UnitarySum(int n_qubits, std::vector<UnitaryTerm> terms = {});

  int n_qubits() const { return n_qubits_; }
  const std::vector<UnitaryTerm>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  void append(Complex coefficient, Circuit circuit);
  void append(const UnitarySum& other);

  /// Total gate count over all term circuits.
  std::size_t gate_count() const;

private:
  int n_qubits_;
  std::vector<UnitaryTerm> terms_;
};

/// sum_k lambda_k U_k |state>; generally unnormalized.
StateVector apply_unitary_sum(const StateVector& state, const UnitarySum& op);

/// Dense matrix sum_k lambda_k matrix(U_k). Guarded by a qubit cap since the
/// cost is 4^n; intended for tests and oracles.
CMatrix unitary_sum_to_dense(const UnitarySum& op, int max_qubits = 10);

}  // namespace vqsde
