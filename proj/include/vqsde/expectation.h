#pragma once

#include <vector>

#include "vqsde/circuit.h"
#include "vqsde/unitary_sum.h"

namespace vqsde {

/// Piecewise polynomial payoff on [0, x_max]: breakpoints a_0 = 0 < a_1 <
/// ... < a_d = x_max, with per-interval coefficients in ascending powers of
/// x. Interval k covers (a_k, a_{k+1}] except the first, which includes 0.
struct PiecewisePoly {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coeffs;

  static PiecewisePoly constant(double c, double x_max);
  /// max(x - strike, 0) as two intervals.
  static PiecewisePoly call(double strike, double x_max);

  int intervals() const { return static_cast<int>(coeffs.size()); }
  double operator()(double x) const;
};

/// Sum of {I, X, H} tensor-product terms whose action on |0...0> is the
/// characteristic vector of a set of grid indices, with unit amplitudes.
struct IndicatorDecomposition {
  UnitarySum op;
  bool empty_warning = false;
};

/// Indicator of the prefix [0, a]: amplitude 1 on indices i with x_i <= a
/// (inclusive of floor(a/dx)), built from at most O(n) dyadic blocks.
IndicatorDecomposition indicator_prefix(double a, int n, double dx);

/// Indicator of the half-open interval (a_lo, a_hi]; a_lo = 0 includes the
/// origin so that partitions tile the grid exactly.
IndicatorDecomposition indicator_interval(double a_lo, double a_hi, int n,
                                          double dx);

/// S_f with S_f|0> carrying f(x_i) at index i. When f dips negative on the
/// grid the operator embeds f + shift with shift = -min f, and the
/// expectation routines subtract the shift afterwards.
struct PayoffOperator {
  UnitarySum op;
  double shift = 0.0;
  bool snapped_breakpoints = false;
};

PayoffOperator build_Sf(const PiecewisePoly& f, int n, double dx);

/// sqrt(<psi|S_f|0><0|S_f^dag|psi>) - shift * mass = sum_i f(x_i) p_i for a
/// directly embedded distribution. Throws on a negative linear form beyond
/// -1e-12 (signals an unshifted payoff or a corrupt state).
double expectation_exact(const StateVector& psi, const PayoffOperator& sf);

struct SampledExpectation {
  double estimate;
  double stderr_estimate;
};

/// Hadamard-test evaluation of the squared-expectation observable
/// S_f|0><0|S_f^dag term by term, with |0><0| realized as the two-unitary
/// sum (I - X^n CnZ X^n)/2.
SampledExpectation expectation_sampled(const Circuit& prep, double alpha,
                                       const PayoffOperator& sf,
                                       std::int64_t shots_per_term,
                                       std::uint64_t seed);

struct MeasurementBudget {
  double gamma;
  double eps_per_term;
  std::int64_t shots_per_term;
  std::int64_t n_unitaries;
  std::int64_t hadamard_total_shots;
  std::int64_t qpe_measurements;  // per-term, O(log(1/eps'))
  std::int64_t qpe_depth;         // controlled-U repetitions, O(1/eps')
};

/// Cost estimate for reaching total error epsilon: gamma converts it to the
/// per-term budget eps' = gamma * epsilon.
MeasurementBudget measurement_budget(double e_estimate, const RVector& p,
                                     const std::vector<double>& xi_magnitudes,
                                     double epsilon);

/// Coefficient magnitudes |xi_i| of a payoff operator's unitary terms.
std::vector<double> coefficient_magnitudes(const PayoffOperator& sf);

/// Worst-case expectation error of an Lth-order piecewise Taylor fit on d
/// equal intervals: bound = derivative_bound * h^{L+1} / (L+1)! with
/// h = x_max / d.
double poly_error_bound(int d, int order, double x_max,
                        double derivative_bound);

}  // namespace vqsde
