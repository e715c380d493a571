#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vqsde/ansatz.h"
#include "vqsde/generator.h"
#include "vqsde/unitary_sum.h"

namespace vqsde {

/// Euler-Lagrange system M theta_dot = V of McLachlan's principle.
struct McLachlanSystem {
  RMatrix m;
  RVector v;
};

/// Exact statevector evaluation or shot-sampled Hadamard tests.
struct EvalMode {
  bool exact = true;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  static EvalMode exact_mode() { return {true, 0, 0}; }
  static EvalMode shots_mode(std::int64_t shots, std::uint64_t seed) {
    return {false, shots, seed};
  }
};

/// Gram matrix M_{k,j} = Re <d_k v | d_j v> over parameters k = 0..M.
RMatrix compute_M(const AnsatzSpec& spec, const AnsatzState& state,
                  const EvalMode& mode = EvalMode::exact_mode());

/// V_k = Re <d_k v | L | v>.
RVector compute_V(const AnsatzSpec& spec, const AnsatzState& state,
                  const UnitarySum& l_op,
                  const EvalMode& mode = EvalMode::exact_mode());

struct SolverOptions {
  double svd_rcond = 1e-8;  // relative singular value cutoff
};

/// One forward-Euler step: theta += dt * pinv(M) V. Throws if every singular
/// value falls below the cutoff. Alpha (parameter 0) is clamped to stay
/// positive; `warned_alpha_clamp` reports when the clamp fired.
AnsatzState vqs_step(const McLachlanSystem& system, const AnsatzState& state,
                     double dt, const SolverOptions& options = {},
                     bool* warned_alpha_clamp = nullptr);

struct FitResult {
  AnsatzState state;
  double residual;  // || alpha R(theta)|0> - p ||_2
};

/// Least-squares fit of the ansatz to a target distribution by multi-start
/// Adam with analytic gradients. Structured starts cover every basis state
/// and the uniform distribution; the rest are random.
FitResult fit_initial(const AnsatzSpec& spec, const LatticeDistribution& target,
                      int restarts, std::uint64_t seed);

struct TrajectoryPoint {
  double t;
  AnsatzState state;
  LatticeDistribution distribution;
  double min_amplitude;  // most negative embedded entry, diagnostic
};

struct SimulateOptions {
  EvalMode mode = EvalMode::exact_mode();
  SolverOptions solver;
  int fit_restarts = 20;
  std::uint64_t fit_seed = 1;
  bool rk4_parameters = false;  // RK4 on the parameter ODE instead of Euler
};

struct SimulateResult {
  std::vector<TrajectoryPoint> trajectory;
  double fit_residual;
  bool alpha_clamped = false;
};

/// Generic driver: evolve the ansatz under a time-dependent generator from a
/// fitted initial distribution.
SimulateResult simulate(const std::function<UnitarySum(double)>& l_provider,
                        const LatticeDistribution& initial,
                        const AnsatzSpec& ansatz, double t_final, double dt,
                        const SimulateOptions& options = {});

/// Convenience wrapper for a 1-D process spec.
SimulateResult simulate(const ProcessSpec& process, const AnsatzSpec& ansatz,
                        double t_final, double dt,
                        const SimulateOptions& options = {});

}  // namespace vqsde
