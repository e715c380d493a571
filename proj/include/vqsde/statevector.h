#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace vqsde {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Dense amplitude vector on an n-qubit register. Qubit 0 is the most
/// significant bit of the basis index, so for n=2 the index 2 is |10>.
class StateVector {
public:
  StateVector(int n_qubits, CVector amplitudes);

  /// |0...0> on n qubits.
  static StateVector zero_state(int n_qubits);
  /// Computational basis state |index>.
  static StateVector basis_state(int n_qubits, std::int64_t index);

  int n_qubits() const { return n_qubits_; }
  std::int64_t dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  CVector& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = 1e-10) const;

private:
  int n_qubits_;
  CVector amplitudes_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

}  // namespace vqsde
