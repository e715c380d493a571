#pragma once

#include <vector>

#include "vqsde/circuit.h"

namespace vqsde {

/// Hardware-efficient real-amplitude ansatz: an initial RY layer followed by
/// `depth` blocks of [wraparound CNOT ladder, RY layer]. Parameter count is
/// n_qubits * (depth + 1); parameters are ordered layer-major.
struct AnsatzSpec {
  int n_qubits;
  int depth;

  int param_count() const { return n_qubits * (depth + 1); }
};

/// Variational parameters (alpha, theta_1..theta_M) of the unnormalized
/// embedded state alpha * R(theta)|0>.
struct AnsatzState {
  double alpha;
  std::vector<double> theta;
};

/// R(theta) as a circuit.
Circuit ansatz_circuit(const AnsatzSpec& spec, const std::vector<double>& theta);

/// The normalized state R(theta)|0>; amplitudes are real.
StateVector ansatz_state_vector(const AnsatzSpec& spec,
                                const std::vector<double>& theta);

/// alpha * R(theta)|0>.
StateVector embedded_state(const AnsatzSpec& spec, const AnsatzState& state);

/// Circuit preparing i * dR/dtheta_p |0> up to the real factor 1/2: the
/// ansatz circuit with a Y generator inserted after RY gate p. The derivative
/// state is (-i/2) times this circuit applied to |0>.
Circuit derivative_circuit(const AnsatzSpec& spec,
                           const std::vector<double>& theta, int param_index);

/// Partial derivative of the embedded state w.r.t. parameter k, with k = 0
/// meaning alpha and k >= 1 meaning theta_k. All amplitudes are real.
StateVector derivative_state(const AnsatzSpec& spec, const AnsatzState& state,
                             int k);

}  // namespace vqsde
