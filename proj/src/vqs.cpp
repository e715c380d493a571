#include "vqsde/vqs.h"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vqsde/hadamard.h"

namespace vqsde {

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Re(c * <0| circuit |0>) by a phase-folded Hadamard test.
double sampled_weighted_real(const Circuit& circuit, Complex c,
                             std::int64_t shots, std::uint64_t seed) {
  if (c == Complex(0.0, 0.0)) {
    return 0.0;
  }
  Circuit prep(circuit.n_qubits());
  return std::abs(c) * estimate_overlap_phase(prep, circuit, std::arg(c),
                                              shots, seed);
}

}  // namespace

RMatrix compute_M(const AnsatzSpec& spec, const AnsatzState& state,
                  const EvalMode& mode) {
  const int m = spec.param_count();
  RMatrix out(m + 1, m + 1);
  if (mode.exact) {
    std::vector<StateVector> d;
    d.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
      d.push_back(derivative_state(spec, state, k));
    }
    for (int k = 0; k <= m; ++k) {
      for (int j = k; j <= m; ++j) {
        const double value = inner_product(d[k], d[j]).real();
        out(k, j) = value;
        out(j, k) = value;
      }
    }
    return out;
  }

  const Circuit r = ansatz_circuit(spec, state.theta);
  std::vector<Circuit> deriv;
  deriv.reserve(m);
  for (int p = 0; p < m; ++p) {
    deriv.push_back(derivative_circuit(spec, state.theta, p));
  }
  std::uint64_t idx = 0;
  out(0, 0) = 1.0;  // <v|v> for the normalized ansatz state
  for (int j = 1; j <= m; ++j) {
    // <d_0|d_j> = (-i alpha/2) <0|R^dag U_j|0>
    Circuit c = deriv[j - 1];
    c.append(r.adjoint());
    const double value = sampled_weighted_real(
        c, Complex(0.0, -0.5 * state.alpha), mode.shots,
        derive_seed(mode.seed, idx++));
    out(0, j) = value;
    out(j, 0) = value;
  }
  const double scale = 0.25 * state.alpha * state.alpha;
  for (int k = 1; k <= m; ++k) {
    for (int j = k; j <= m; ++j) {
      Circuit c = deriv[j - 1];
      c.append(deriv[k - 1].adjoint());
      const double value = scale * sampled_weighted_real(
                                       c, 1.0, mode.shots,
                                       derive_seed(mode.seed, idx++));
      out(k, j) = value;
      out(j, k) = value;
    }
  }
  return out;
}

RVector compute_V(const AnsatzSpec& spec, const AnsatzState& state,
                  const UnitarySum& l_op, const EvalMode& mode) {
  if (l_op.n_qubits() != spec.n_qubits) {
    throw std::invalid_argument("compute_V: operator dimension mismatch");
  }
  const int m = spec.param_count();
  RVector out(m + 1);
  if (l_op.term_count() == 0) {
    // A term-free operator means a frozen process: V = 0, parameters rest.
    out.setZero();
    return out;
  }
  if (mode.exact) {
    const StateVector lv =
        apply_unitary_sum(embedded_state(spec, state), l_op);
    for (int k = 0; k <= m; ++k) {
      out[k] = inner_product(derivative_state(spec, state, k), lv).real();
    }
    return out;
  }

  const Circuit r = ansatz_circuit(spec, state.theta);
  std::uint64_t idx = 1u << 20;  // disjoint from compute_M's seed stream
  for (int k = 0; k <= m; ++k) {
    const Circuit bra_adj =
        k == 0 ? r.adjoint()
               : derivative_circuit(spec, state.theta, k - 1).adjoint();
    // <d_k| L |v> term by term; the complex phase of each lambda (and of the
    // derivative factor i/2) is folded into the ancilla preparation phase.
    const Complex factor =
        k == 0 ? Complex(state.alpha, 0.0)
               : Complex(0.0, 0.5 * state.alpha * state.alpha);
    double acc = 0.0;
    for (const UnitaryTerm& term : l_op.terms()) {
      Circuit c = r;
      c.append(term.circuit);
      c.append(bra_adj);
      acc += sampled_weighted_real(c, factor * term.coefficient, mode.shots,
                                   derive_seed(mode.seed, idx++));
    }
    out[k] = acc;
  }
  return out;
}

namespace {

// Truncated-SVD pseudo-solve of M theta_dot = V.
RVector solve_theta_dot(const McLachlanSystem& system,
                        const SolverOptions& options) {
  Eigen::JacobiSVD<RMatrix> svd(system.m,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  if (!(sv[0] > 0.0)) {
    throw std::runtime_error("vqs_step: M matrix is zero");
  }
  const double cutoff = options.svd_rcond * sv[0];
  RVector inv_sv = RVector::Zero(sv.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) {
      inv_sv[i] = 1.0 / sv[i];
      ++rank;
    }
  }
  if (rank == 0) {
    throw std::runtime_error("vqs_step: all singular values below cutoff");
  }
  return svd.matrixV() * inv_sv.asDiagonal() *
         (svd.matrixU().transpose() * system.v);
}

}  // namespace

AnsatzState vqs_step(const McLachlanSystem& system, const AnsatzState& state,
                     double dt, const SolverOptions& options,
                     bool* warned_alpha_clamp) {
  if (dt <= 0.0) {
    throw std::invalid_argument("vqs_step: dt must be positive");
  }
  const RVector theta_dot = solve_theta_dot(system, options);
  AnsatzState next = state;
  next.alpha += dt * theta_dot[0];
  if (next.alpha <= 0.0) {
    next.alpha = 1e-12;
    if (warned_alpha_clamp != nullptr) {
      *warned_alpha_clamp = true;
    }
  }
  for (std::size_t i = 0; i < next.theta.size(); ++i) {
    next.theta[i] += dt * theta_dot[i + 1];
  }
  return next;
}

namespace {

double fit_residual(const AnsatzSpec& spec, const AnsatzState& state,
                    const RVector& target) {
  const StateVector v = embedded_state(spec, state);
  return (v.amplitudes().real() - target).norm();
}

// Adam descent on || alpha R(theta)|0> - p ||^2 with analytic gradients.
FitResult polish(const AnsatzSpec& spec, AnsatzState state,
                 const RVector& target, int max_iters) {
  const int m = spec.param_count();
  RVector grad(m + 1), adam_m = RVector::Zero(m + 1),
      adam_v = RVector::Zero(m + 1);
  const double lr = 0.08, beta1 = 0.9, beta2 = 0.999, eps = 1e-9;
  AnsatzState best = state;
  double best_res = fit_residual(spec, state, target);
  for (int it = 1; it <= max_iters; ++it) {
    const StateVector v = ansatz_state_vector(spec, state.theta);
    const RVector vr = v.amplitudes().real();
    const RVector err = state.alpha * vr - target;
    grad[0] = 2.0 * err.dot(vr);
    for (int k = 1; k <= m; ++k) {
      grad[k] =
          2.0 * err.dot(derivative_state(spec, state, k).amplitudes().real());
    }
    adam_m = beta1 * adam_m + (1.0 - beta1) * grad;
    adam_v = beta2 * adam_v.eval() +
             (1.0 - beta2) * grad.cwiseProduct(grad).eval();
    const double bc1 = 1.0 - std::pow(beta1, it);
    const double bc2 = 1.0 - std::pow(beta2, it);
    for (int k = 0; k <= m; ++k) {
      const double step =
          lr * (adam_m[k] / bc1) / (std::sqrt(adam_v[k] / bc2) + eps);
      if (k == 0) {
        state.alpha -= step;
      } else {
        state.theta[k - 1] -= step;
      }
    }
    if (state.alpha < 1e-9) {
      state.alpha = 1e-9;
    }
    const double res = fit_residual(spec, state, target);
    if (res < best_res) {
      best_res = res;
      best = state;
    }
    if (best_res < 1e-12) {
      break;
    }
  }
  return {best, best_res};
}

}  // namespace

FitResult fit_initial(const AnsatzSpec& spec, const LatticeDistribution& target,
                      int restarts, std::uint64_t seed) {
  const std::int64_t dim = std::int64_t{1} << spec.n_qubits;
  if (target.p.size() != dim) {
    throw std::invalid_argument("fit_initial: target length mismatch");
  }
  const int m = spec.param_count();
  std::vector<AnsatzState> starts;

  auto with_best_alpha = [&](std::vector<double> theta) {
    const RVector vr =
        ansatz_state_vector(spec, theta).amplitudes().real();
    const double alpha = std::max(vr.dot(target.p), 1e-6);
    starts.push_back({alpha, std::move(theta)});
  };

  // Structured starts: every first-layer bit pattern (covers all basis
  // states through the ladder permutation) and the uniform state.
  for (std::int64_t b = 0; b < dim; ++b) {
    std::vector<double> theta(m, 0.0);
    for (int q = 0; q < spec.n_qubits; ++q) {
      if (b & (std::int64_t{1} << (spec.n_qubits - 1 - q))) {
        theta[q] = M_PI;
      }
    }
    with_best_alpha(std::move(theta));
  }
  {
    std::vector<double> theta(m, 0.0);
    for (int q = 0; q < spec.n_qubits; ++q) {
      theta[q] = M_PI / 2.0;
    }
    with_best_alpha(std::move(theta));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.6);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> theta(m);
    for (double& x : theta) {
      x = dist(rng);
    }
    with_best_alpha(std::move(theta));
  }

  FitResult best{{1.0, std::vector<double>(m, 0.0)},
                 std::numeric_limits<double>::infinity()};
  for (const AnsatzState& start : starts) {
    const FitResult r = polish(spec, start, target.p, 800);
    if (r.residual < best.residual) {
      best = r;
    }
    if (best.residual < 1e-12) {
      break;
    }
  }
  return best;
}

namespace {

RVector theta_dot_at(const AnsatzSpec& ansatz, const AnsatzState& state,
                     const UnitarySum& l_op, const SimulateOptions& options) {
  McLachlanSystem sys{compute_M(ansatz, state, options.mode),
                      compute_V(ansatz, state, l_op, options.mode)};
  return solve_theta_dot(sys, options.solver);
}

AnsatzState advance(const AnsatzState& state, const RVector& dot, double dt,
                    bool* clamped) {
  AnsatzState next = state;
  next.alpha += dt * dot[0];
  if (next.alpha <= 0.0) {
    next.alpha = 1e-12;
    if (clamped != nullptr) {
      *clamped = true;
    }
  }
  for (std::size_t i = 0; i < next.theta.size(); ++i) {
    next.theta[i] += dt * dot[i + 1];
  }
  return next;
}

}  // namespace

SimulateResult simulate(const std::function<UnitarySum(double)>& l_provider,
                        const LatticeDistribution& initial,
                        const AnsatzSpec& ansatz, double t_final, double dt,
                        const SimulateOptions& options) {
  if (t_final <= 0.0 || dt <= 0.0) {
    throw std::invalid_argument("simulate: T and dt must be positive");
  }
  SimulateResult result;
  FitResult fit =
      fit_initial(ansatz, initial, options.fit_restarts, options.fit_seed);
  result.fit_residual = fit.residual;
  AnsatzState state = fit.state;

  const auto n_steps = static_cast<std::int64_t>(std::llround(t_final / dt));
  auto record = [&](double t) {
    const StateVector v = embedded_state(ansatz, state);
    const RVector p = v.amplitudes().real();
    result.trajectory.push_back(
        {t, state, LatticeDistribution{p, t}, p.minCoeff()});
  };
  record(0.0);
  for (std::int64_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    try {
      if (!options.rk4_parameters) {
        McLachlanSystem sys{compute_M(ansatz, state, options.mode),
                            compute_V(ansatz, state, l_provider(t),
                                      options.mode)};
        state = vqs_step(sys, state, dt, options.solver,
                         &result.alpha_clamped);
      } else {
        const RVector k1 = theta_dot_at(ansatz, state, l_provider(t), options);
        const RVector k2 =
            theta_dot_at(ansatz, advance(state, k1, dt / 2, nullptr),
                         l_provider(t + dt / 2), options);
        const RVector k3 =
            theta_dot_at(ansatz, advance(state, k2, dt / 2, nullptr),
                         l_provider(t + dt / 2), options);
        const RVector k4 = theta_dot_at(ansatz, advance(state, k3, dt, nullptr),
                                        l_provider(t + dt), options);
        const RVector dot = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        state = advance(state, dot, dt, &result.alpha_clamped);
      }
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("simulate: step " + std::to_string(step) +
                               ": " + e.what());
    }
    record(static_cast<double>(step + 1) * dt);
  }
  return result;
}

SimulateResult simulate(const ProcessSpec& process, const AnsatzSpec& ansatz,
                        double t_final, double dt,
                        const SimulateOptions& options) {
  if (ansatz.n_qubits != process.n_qubits()) {
    throw std::invalid_argument("simulate: ansatz/process qubit mismatch");
  }
  return simulate(
      [&process](double t) { return build_L_unitary_sum(process, t); },
      process.initial_lattice(), ansatz, t_final, dt, options);
}

}  // namespace vqsde
