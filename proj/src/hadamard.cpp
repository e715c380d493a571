#include "vqsde/hadamard.h"

#include <random>
#include <stdexcept>

namespace vqsde {

namespace {

// Builds the full test circuit on n+1 qubits with the ancilla on qubit 0 and
// returns the exact probability of measuring the ancilla in |0>.
double ancilla_p0(const Circuit& prep, const Circuit& u, double phase) {
  if (prep.n_qubits() != u.n_qubits()) {
    throw std::invalid_argument("hadamard test: prep/U qubit count mismatch");
  }
  const int n = prep.n_qubits();
  Circuit full(n + 1);
  full.append(prep.shifted(1, n + 1));
  full.append(Gate::h(0));
  if (phase != 0.0) {
    full.append(Gate::phase(0, phase));
  }
  full.append(u.shifted(1, n + 1).controlled_on(0));
  full.append(Gate::h(0));

  StateVector out = apply_circuit(StateVector::zero_state(n + 1), full);
  const std::int64_t sys_dim = std::int64_t{1} << n;
  double p0 = 0.0;
  for (std::int64_t i = 0; i < sys_dim; ++i) {
    p0 += std::norm(out.amplitudes()[i]);
  }
  return p0;
}

}  // namespace

double exact_overlap_phase(const Circuit& prep, const Circuit& u,
                           double phase) {
  return 2.0 * ancilla_p0(prep, u, phase) - 1.0;
}

double estimate_overlap_phase(const Circuit& prep, const Circuit& u,
                              double phase, std::int64_t shots,
                              std::uint64_t rng_seed) {
  if (shots < 1) {
    throw std::invalid_argument("estimate_overlap_phase: shots must be >= 1");
  }
  double p0 = ancilla_p0(prep, u, phase);
  // Clamp away round-off before handing to the binomial sampler.
  p0 = std::min(1.0, std::max(0.0, p0));
  std::mt19937_64 rng(rng_seed);
  std::binomial_distribution<std::int64_t> dist(shots, p0);
  const std::int64_t zeros = dist(rng);
  return 2.0 * static_cast<double>(zeros) / static_cast<double>(shots) - 1.0;
}

double estimate_overlap_hadamard(const Circuit& prep, const Circuit& u,
                                 std::int64_t shots, OverlapPart part,
                                 std::uint64_t rng_seed) {
  const double phase = part == OverlapPart::Real ? 0.0 : -M_PI / 2.0;
  return estimate_overlap_phase(prep, u, phase, shots, rng_seed);
}

}  // namespace vqsde
