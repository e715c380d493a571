#include "vqsde/ansatz.h"

#include <stdexcept>

namespace vqsde {

namespace {

void check_theta(const AnsatzSpec& spec, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != spec.param_count()) {
    throw std::invalid_argument("ansatz: wrong parameter count");
  }
}

// Builds R(theta), optionally inserting a Y right after RY gate
// `insert_after` (-1 for none).
Circuit build(const AnsatzSpec& spec, const std::vector<double>& theta,
              int insert_after) {
  check_theta(spec, theta);
  const int n = spec.n_qubits;
  Circuit c(n);
  int p = 0;
  auto ry_layer = [&](int layer) {
    for (int q = 0; q < n; ++q) {
      c.append(Gate::ry(q, theta[layer * n + q]));
      if (p == insert_after) {
        c.append(Gate::y(q));
      }
      ++p;
    }
  };
  ry_layer(0);
  for (int block = 1; block <= spec.depth; ++block) {
    for (int q = 0; q + 1 < n; ++q) {
      c.append(Gate::cnot(q, q + 1));
    }
    if (n > 1) {
      c.append(Gate::cnot(n - 1, 0));
    }
    ry_layer(block);
  }
  return c;
}

}  // namespace

Circuit ansatz_circuit(const AnsatzSpec& spec,
                       const std::vector<double>& theta) {
  return build(spec, theta, -1);
}

StateVector ansatz_state_vector(const AnsatzSpec& spec,
                                const std::vector<double>& theta) {
  return apply_circuit(StateVector::zero_state(spec.n_qubits),
                       ansatz_circuit(spec, theta));
}

StateVector embedded_state(const AnsatzSpec& spec, const AnsatzState& state) {
  StateVector v = ansatz_state_vector(spec, state.theta);
  return StateVector(spec.n_qubits, state.alpha * v.amplitudes());
}

Circuit derivative_circuit(const AnsatzSpec& spec,
                           const std::vector<double>& theta, int param_index) {
  if (param_index < 0 || param_index >= spec.param_count()) {
    throw std::out_of_range("derivative_circuit: parameter index out of range");
  }
  return build(spec, theta, param_index);
}

StateVector derivative_state(const AnsatzSpec& spec, const AnsatzState& state,
                             int k) {
  if (k < 0 || k > spec.param_count()) {
    throw std::out_of_range("derivative_state: index out of range");
  }
  if (k == 0) {
    return ansatz_state_vector(spec, state.theta);
  }
  // d/dtheta RY = (-i/2) Y RY, so the derivative of alpha R|0> is
  // (-i alpha / 2) times the Y-inserted circuit on |0>.
  StateVector v =
      apply_circuit(StateVector::zero_state(spec.n_qubits),
                    derivative_circuit(spec, state.theta, k - 1));
  CVector amps = Complex(0.0, -0.5 * state.alpha) * v.amplitudes();
  // The circuit is real except for the inserted Y, so these are real; drop
  // round-off imaginary parts to keep downstream reality checks exact.
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    amps[i] = Complex(amps[i].real(), 0.0);
  }
  return StateVector(spec.n_qubits, std::move(amps));
}

}  // namespace vqsde
