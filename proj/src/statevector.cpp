#include "vqsde/statevector.h"

#include <cmath>
#include <stdexcept>

namespace vqsde {

StateVector::StateVector(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits < 1) {
    throw std::invalid_argument("StateVector: n_qubits must be positive");
  }
  if (amplitudes_.size() != (std::int64_t{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: amplitude length must be 2^n");
  }
}

StateVector StateVector::zero_state(int n_qubits) {
  return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::int64_t index) {
  std::int64_t dim = std::int64_t{1} << n_qubits;
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("StateVector: basis index out of range");
  }
  CVector amps = CVector::Zero(dim);
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace vqsde
