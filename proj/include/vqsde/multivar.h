#pragma once

#include <cstdint>
#include <vector>

#include "vqsde/expectation.h"
#include "vqsde/generator.h"
#include "vqsde/unitary_sum.h"

namespace vqsde {

/// One coordinate of a correlated multivariate diffusion. The volatility
/// polynomial is sigma itself, not sigma squared: cross terms couple
/// sigma_k * sigma_l, so the squared form is recovered by convolution.
struct MultiDimSpec {
  std::vector<double> mu_coeffs;
  std::vector<double> sigma_coeffs;
  double x_max;
  int n_qubits;

  std::int64_t grid_points() const { return std::int64_t{1} << n_qubits; }
  double dx() const {
    return x_max / static_cast<double>(grid_points() - 1);
  }
  double grid_x(std::int64_t i) const { return dx() * static_cast<double>(i); }
};

/// Correlated D-variable diffusion on a product grid. Dimension 0 occupies
/// the most significant qubit block of the combined register.
class MultiProcessSpec {
public:
  MultiProcessSpec(std::vector<MultiDimSpec> dims, RMatrix rho);

  int dimension_count() const { return static_cast<int>(dims_.size()); }
  const MultiDimSpec& dim(int d) const { return dims_[d]; }
  const RMatrix& rho() const { return rho_; }
  int total_qubits() const { return total_qubits_; }
  std::int64_t total_points() const { return std::int64_t{1} << total_qubits_; }
  int qubit_offset(int d) const { return offsets_[d]; }

  double mu(int d, double x) const;
  double sigma(int d, double x) const;
  /// sigma_d^2 as an explicit polynomial (self-convolution of sigma_d).
  const std::vector<double>& sigma2_coeffs(int d) const {
    return sigma2_coeffs_[d];
  }

  /// Per-dimension indices of a flattened grid index and back.
  std::vector<std::int64_t> unflatten(std::int64_t index) const;
  std::int64_t flatten(const std::vector<std::int64_t>& index) const;

private:
  std::vector<MultiDimSpec> dims_;
  RMatrix rho_;
  std::vector<std::vector<double>> sigma2_coeffs_;
  std::vector<int> offsets_;
  int total_qubits_;
};

/// One-step transition probabilities of the correlated lattice chain in the
/// closed-form branch where only both-up pair moves are nonzero. Pair moves
/// are kept per ordered pair (k, l); the two orderings address the same
/// target node, so the total both-up weight per unordered pair is their sum.
/// All listed outcomes sum to 1 exactly; negative entries are flagged.
struct MultiTransition {
  double p_m;
  std::vector<double> p_u;
  std::vector<double> p_d;
  RMatrix p_uu;  // (k, l) entry, zero diagonal
  bool negative;
};

MultiTransition multi_transition_probs(const MultiProcessSpec& spec,
                                       const std::vector<std::int64_t>& index,
                                       double t, double dt);

/// Dense generator over the product grid: single-hop terms per dimension,
/// both-up correlation hops, diagonal -sum_d sigma_d^2/dx_d^2. Interior
/// column sums vanish exactly. Guarded by a total-qubit cap.
RMatrix build_L_multi_dense(const MultiProcessSpec& spec, double t,
                            int max_qubits = 12);

/// Sum-of-unitaries form of the same generator: per-dimension blocks reuse
/// the one-dimensional construction, up-hop rates get the correlation
/// correction (index polynomials of both coupled dimensions), and both-up
/// hops pair cyclic increments of two blocks.
UnitarySum build_L_multi_unitary_sum(const MultiProcessSpec& spec, double t);

/// Monomial coeff * prod_d x_d^{exponents[d]}.
struct MultiMonomial {
  double coeff;
  std::vector<int> exponents;
};

/// Piecewise polynomial on a product domain: per-dimension breakpoints
/// define a grid of rectangular regions, each carrying a list of monomials.
/// Regions are indexed row-major with dimension 0 slowest. Interval k of
/// dimension i covers (a_k, a_{k+1}] with the first interval including 0.
struct MultiPiecewisePoly {
  std::vector<std::vector<double>> breakpoints;
  std::vector<std::vector<MultiMonomial>> regions;

  static MultiPiecewisePoly constant(double c,
                                     const std::vector<double>& x_maxes);

  int region_count() const { return static_cast<int>(regions.size()); }
  double operator()(const std::vector<double>& x) const;
};

/// S_f over the product grid from tensor products of one-dimensional
/// indicator decompositions and per-region diagonal monomials. Negative
/// payoffs are embedded with the usual positivity shift.
PayoffOperator build_multi_Sf(const MultiPiecewisePoly& f,
                              const MultiProcessSpec& spec);

}  // namespace vqsde
