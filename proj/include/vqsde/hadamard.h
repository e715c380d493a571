#pragma once

#include <cstdint>

#include "vqsde/circuit.h"

namespace vqsde {

enum class OverlapPart { Real, Imaginary };

/// Shot-sampled estimate of Re(e^{i phase} <psi|U|psi>) with |psi> = prep|0>.
/// The ancilla-controlled circuit is simulated on n+1 qubits: ancilla
/// prepared as (|0> + e^{i phase}|1>)/sqrt(2), controlled-U, final H; the
/// ancilla outcome 2p-1 is averaged over `shots` Born-rule samples.
double estimate_overlap_phase(const Circuit& prep, const Circuit& u,
                              double phase, std::int64_t shots,
                              std::uint64_t rng_seed);

/// Hadamard-test estimate of Re or Im <psi|U|psi>. The imaginary part uses
/// the S^dag-before-H variant, i.e. ancilla phase -pi/2.
double estimate_overlap_hadamard(const Circuit& prep, const Circuit& u,
                                 std::int64_t shots, OverlapPart part,
                                 std::uint64_t rng_seed);

/// Exact ancilla bias P(0) - P(1) of the same circuit; equals
/// Re(e^{i phase} <psi|U|psi>). Used by tests and by exact-mode callers.
double exact_overlap_phase(const Circuit& prep, const Circuit& u, double phase);

}  // namespace vqsde
