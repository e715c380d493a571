#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "vqsde/unitary_sum.h"

namespace vqsde {

/// Point mass at the grid point nearest x0.
struct DeltaInitial {
  double x0;
};

/// Gaussian density sampled on the grid and renormalized.
struct GaussianInitial {
  double mean;
  double std;
};

/// Explicit probability vector of length 2^n.
struct ExplicitInitial {
  std::vector<double> p;
};

using InitialDistribution =
    std::variant<DeltaInitial, GaussianInitial, ExplicitInitial>;

/// Probability vector on the 2^n-point grid at a point in time. Entries may
/// dip slightly negative from numerics or ansatz artifacts.
struct LatticeDistribution {
  RVector p;
  double t = 0.0;
};

/// One-dimensional process dX = mu(X,t) dt + sigma(X,t) dW on [0, x_max],
/// specified through polynomial coefficients of mu and of sigma^2 (ascending
/// powers of x). The grid has 2^n points with dx = x_max / (2^n - 1).
/// Time-dependent coefficients are supported through an optional schedule of
/// (t, coefficients) rows; the last row with t_row <= t applies.
class ProcessSpec {
public:
  ProcessSpec(std::vector<double> mu_coeffs, std::vector<double> sigma2_coeffs,
              double x_max, int n_qubits, InitialDistribution initial);

  static ProcessSpec gbm(double r, double sigma, double x_max, int n_qubits,
                         InitialDistribution initial);
  static ProcessSpec ornstein_uhlenbeck(double r, double sigma, double eta,
                                        double x_max, int n_qubits,
                                        InitialDistribution initial);

  int n_qubits() const { return n_qubits_; }
  std::int64_t grid_points() const { return std::int64_t{1} << n_qubits_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double grid_x(std::int64_t i) const { return dx_ * static_cast<double>(i); }

  std::vector<double> mu_coeffs(double t = 0.0) const;
  std::vector<double> sigma2_coeffs(double t = 0.0) const;
  double mu(double x, double t = 0.0) const;
  double sigma2(double x, double t = 0.0) const;

  const InitialDistribution& initial() const { return initial_; }
  /// Initial distribution projected onto the grid; sums to 1.
  LatticeDistribution initial_lattice() const;

  void set_schedule(std::map<double, std::vector<double>> mu_schedule,
                    std::map<double, std::vector<double>> sigma2_schedule);

private:
  std::vector<double> mu_coeffs_;
  std::vector<double> sigma2_coeffs_;
  std::map<double, std::vector<double>> mu_schedule_;
  std::map<double, std::vector<double>> sigma2_schedule_;
  double x_max_;
  int n_qubits_;
  double dx_;
  InitialDistribution initial_;
};

double eval_poly(const std::vector<double>& coeffs, double x);

struct TransitionProbs {
  double p_u;
  double p_d;
  double p_m;
  bool negative = false;  // some probability left [0,1]; continuum still valid
};

/// Trinomial transition probabilities at grid index i; always sums to 1.
TransitionProbs transition_probs(const ProcessSpec& spec, std::int64_t i,
                                 double t, double dt);

/// Tridiagonal generator of dP/dt = L P on the truncated grid.
RMatrix build_L_dense(const ProcessSpec& spec, double t = 0.0);

/// Cyclic permutation j -> j+1 mod 2^n as a cascade of multi-controlled X.
Circuit cyc_inc(int n);
/// Cyclic permutation j -> j-1 mod 2^n (the reversed cascade).
Circuit cyc_dec(int n);

/// V+ = CycInc . (CnZ + I)/2, the shift sum_{i<2^n-1} |i+1><i|.
UnitarySum v_plus(int n);
/// V- = (CnZ + I)/2 . CycDec, the shift sum_{i>0} |i-1><i|.
UnitarySum v_minus(int n);

/// (D(n))^m with D(n) = diag(0, 1, ..., 2^n - 1), expanded into Pauli-Z
/// product terms. Coefficients are exact in double arithmetic.
UnitarySum d_operator(int n, int power);

/// Pauli-Z polynomial for D^m: mask of Z positions -> coefficient. The mask
/// bit for qubit q is 1 << q.
std::map<std::uint64_t, double> d_power_terms(int n, int power);

/// Sum-of-unitaries form of the generator; matches build_L_dense elementwise.
UnitarySum build_L_unitary_sum(const ProcessSpec& spec, double t = 0.0);

/// Few-qubit-gate budget of the decomposition if CnZ and the cyclic shifts
/// were compiled to Toffoli/CNOT/single-qubit gates (the statevector backend
/// applies them directly, so this is a report, not an execution path).
struct GateCountReport {
  std::size_t terms;
  std::size_t compiled_gates;
};
GateCountReport decomposition_gate_report(const UnitarySum& op);

}  // namespace vqsde
