#include "vqsde/expectation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "vqsde/generator.h"
#include "vqsde/hadamard.h"

namespace vqsde {

PiecewisePoly PiecewisePoly::constant(double c, double x_max) {
  return {{0.0, x_max}, {{c}}};
}

PiecewisePoly PiecewisePoly::call(double strike, double x_max) {
  if (strike <= 0.0 || strike >= x_max) {
    return {{0.0, x_max}, {{-strike, 1.0}}};
  }
  return {{0.0, strike, x_max}, {{0.0}, {-strike, 1.0}}};
}

double PiecewisePoly::operator()(double x) const {
  if (breakpoints.size() != coeffs.size() + 1) {
    throw std::invalid_argument("PiecewisePoly: breakpoint/coeff mismatch");
  }
  int k = 0;
  for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i) {
    if (x > breakpoints[i]) {
      k = static_cast<int>(i);
    }
  }
  return eval_poly(coeffs[k], x);
}

namespace {

// {I, X, H} tensor-product term selecting the dyadic block
// [start, start + 2^block_bits) of grid indices.
UnitaryTerm dyadic_block_term(int n, std::int64_t start, int block_bits) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) {
    const int bitpos = n - 1 - q;
    if (bitpos >= block_bits) {
      if (start & (std::int64_t{1} << bitpos)) {
        c.append(Gate::x(q));
      }
    } else {
      c.append(Gate::h(q));
    }
  }
  return {std::pow(2.0, 0.5 * block_bits), std::move(c)};
}

// Decomposes the prefix [0, count) into dyadic blocks, largest first.
void append_prefix_terms(UnitarySum& sum, int n, std::int64_t count,
                         double sign) {
  std::int64_t start = 0;
  for (int l = n; l >= 0; --l) {
    const std::int64_t size = std::int64_t{1} << l;
    if (count - start >= size) {
      UnitaryTerm term = dyadic_block_term(n, start, l);
      sum.append(sign * term.coefficient, std::move(term.circuit));
      start += size;
    }
  }
}

std::int64_t grid_index_floor(double a, double dx) {
  return static_cast<std::int64_t>(std::floor(a / dx + 1e-12));
}

}  // namespace

IndicatorDecomposition indicator_prefix(double a, int n, double dx) {
  const std::int64_t dim = std::int64_t{1} << n;
  const double x_max = dx * static_cast<double>(dim - 1);
  if (a < 0.0 || a > x_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("indicator_prefix: a out of range");
  }
  IndicatorDecomposition out{UnitarySum(n)};
  const std::int64_t count = std::min(dim, grid_index_floor(a, dx) + 1);
  append_prefix_terms(out.op, n, count, 1.0);
  return out;
}

IndicatorDecomposition indicator_interval(double a_lo, double a_hi, int n,
                                          double dx) {
  const std::int64_t dim = std::int64_t{1} << n;
  const double x_max = dx * static_cast<double>(dim - 1);
  if (a_lo < 0.0 || a_lo > a_hi || a_hi > x_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("indicator_interval: bad interval");
  }
  // Half-open (a_lo, a_hi]; a_lo = 0 keeps the origin so partitions tile.
  const std::int64_t lo_count =
      a_lo == 0.0 ? 0 : std::min(dim, grid_index_floor(a_lo, dx) + 1);
  const std::int64_t hi_count = std::min(dim, grid_index_floor(a_hi, dx) + 1);
  IndicatorDecomposition out{UnitarySum(n)};
  if (hi_count <= lo_count) {
    out.empty_warning = true;
    return out;
  }
  append_prefix_terms(out.op, n, hi_count, 1.0);
  append_prefix_terms(out.op, n, lo_count, -1.0);
  return out;
}

PayoffOperator build_Sf(const PiecewisePoly& f, int n, double dx) {
  if (f.breakpoints.size() != f.coeffs.size() + 1 || f.coeffs.empty()) {
    throw std::invalid_argument("build_Sf: malformed piecewise polynomial");
  }
  const std::int64_t dim = std::int64_t{1} << n;
  PayoffOperator out{UnitarySum(n)};

  // Snap breakpoints to grid indices; interval k covers indices
  // (bounds[k], bounds[k+1]], with the first interval reaching down to 0.
  std::vector<std::int64_t> bounds(f.breakpoints.size());
  for (std::size_t k = 0; k < f.breakpoints.size(); ++k) {
    const double ratio = f.breakpoints[k] / dx;
    bounds[k] = std::llround(ratio);
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
      out.snapped_breakpoints = true;
    }
  }
  bounds.front() = -1;
  bounds.back() = std::max(bounds.back(), dim - 1);

  auto interval_of = [&](std::int64_t i) {
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
      if (i > bounds[k] && i <= bounds[k + 1]) {
        return static_cast<int>(k);
      }
    }
    return static_cast<int>(f.coeffs.size()) - 1;
  };
  double min_val = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < dim; ++i) {
    min_val = std::min(
        min_val, eval_poly(f.coeffs[interval_of(i)], dx * double(i)));
  }
  out.shift = min_val < 0.0 ? -min_val : 0.0;

  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (bounds[k + 1] <= bounds[k]) {
      continue;  // interval misses the grid entirely
    }
    UnitarySum chi(n);
    append_prefix_terms(chi, n, bounds[k + 1] + 1, 1.0);
    append_prefix_terms(chi, n, bounds[k] + 1, -1.0);

    std::vector<double> cs = f.coeffs[k];
    cs[0] += out.shift;
    for (std::size_t m = 0; m < cs.size(); ++m) {
      if (cs[m] == 0.0) {
        continue;
      }
      // D(n) carries index powers i^m, so x^m = dx^m i^m.
      const double scaled = cs[m] * std::pow(dx, static_cast<double>(m));
      for (const auto& [mask, dcoef] :
           d_power_terms(n, static_cast<int>(m))) {
        for (const UnitaryTerm& ind : chi.terms()) {
          Circuit c = ind.circuit;
          for (int q = 0; q < n; ++q) {
            if (mask & (std::uint64_t{1} << q)) {
              c.append(Gate::z(q));
            }
          }
          out.op.append(scaled * dcoef * ind.coefficient, std::move(c));
        }
      }
    }
  }
  return out;
}

double expectation_exact(const StateVector& psi, const PayoffOperator& sf) {
  const double mass = psi.amplitudes().real().sum();
  Complex z(0.0, 0.0);
  if (!sf.op.terms().empty()) {
    const StateVector s =
        apply_unitary_sum(StateVector::zero_state(psi.n_qubits()), sf.op);
    z = inner_product(s, psi);
  }
  if (z.real() < -1e-12) {
    throw std::runtime_error(
        "expectation_exact: negative linear form (unshifted payoff?)");
  }
  return std::abs(z) - sf.shift * mass;
}

SampledExpectation expectation_sampled(const Circuit& prep, double alpha,
                                       const PayoffOperator& sf,
                                       std::int64_t shots_per_term,
                                       std::uint64_t seed) {
  if (shots_per_term < 1) {
    throw std::invalid_argument("expectation_sampled: shots must be >= 1");
  }
  const int n = prep.n_qubits();
  Circuit projector_flip(n);  // X^n CnZ X^n, phase -1 on |0...0>
  for (int q = 0; q < n; ++q) {
    projector_flip.append(Gate::x(q));
  }
  projector_flip.append(Gate::cnz(n));
  for (int q = 0; q < n; ++q) {
    projector_flip.append(Gate::x(q));
  }

  const auto& terms = sf.op.terms();
  double combined = 0.0;
  double variance = 0.0;
  std::uint64_t idx = 0;
  const double a2 = alpha * alpha;
  for (const UnitaryTerm& ti : terms) {
    for (const UnitaryTerm& tj : terms) {
      // |0><0| = (I - X^n CnZ X^n) / 2 sandwiched between Q_i and Q_j^dag.
      for (int part = 0; part < 2; ++part) {
        const Complex coeff = ti.coefficient * std::conj(tj.coefficient) *
                              (part == 0 ? 0.5 : -0.5);
        Circuit u = tj.circuit.adjoint();
        if (part == 1) {
          u.append(projector_flip);
        }
        u.append(ti.circuit);
        const double mag = a2 * std::abs(coeff);
        const double raw = estimate_overlap_phase(
            prep, u, std::arg(coeff), shots_per_term,
            seed + 0x51ed270b * (idx++) + 1);
        combined += mag * raw;
        variance += mag * mag * std::max(0.0, 1.0 - raw * raw) /
                    static_cast<double>(shots_per_term);
      }
    }
  }
  const double e_shifted = std::sqrt(std::max(combined, 0.0));
  const double denom = std::max(e_shifted, 1e-12);
  return {e_shifted - sf.shift, std::sqrt(variance) / (2.0 * denom)};
}

std::vector<double> coefficient_magnitudes(const PayoffOperator& sf) {
  std::vector<double> out;
  out.reserve(sf.op.term_count());
  for (const UnitaryTerm& t : sf.op.terms()) {
    out.push_back(std::abs(t.coefficient));
  }
  return out;
}

MeasurementBudget measurement_budget(double e_estimate, const RVector& p,
                                     const std::vector<double>& xi_magnitudes,
                                     double epsilon) {
  if (epsilon <= 0.0 || e_estimate <= 0.0) {
    throw std::invalid_argument("measurement_budget: need E > 0, eps > 0");
  }
  double xi_sum = 0.0;
  for (double m : xi_magnitudes) {
    xi_sum += m;
  }
  if (xi_sum == 0.0) {
    throw std::invalid_argument("measurement_budget: zero coefficient sum");
  }
  const double beta_sum = 2.0 * xi_sum * xi_sum;
  const double p2 = p.squaredNorm();
  MeasurementBudget b{};
  b.gamma = 2.0 * e_estimate / (p2 * beta_sum);
  b.eps_per_term = b.gamma * epsilon;
  b.shots_per_term =
      static_cast<std::int64_t>(std::ceil(1.0 / (b.eps_per_term * b.eps_per_term)));
  const auto n_xi = static_cast<std::int64_t>(xi_magnitudes.size());
  b.n_unitaries = 2 * n_xi * n_xi;
  b.hadamard_total_shots = b.n_unitaries * b.shots_per_term;
  b.qpe_measurements = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::log2(1.0 / b.eps_per_term))));
  b.qpe_depth =
      static_cast<std::int64_t>(std::ceil(1.0 / b.eps_per_term));
  return b;
}

double poly_error_bound(int d, int order, double x_max,
                        double derivative_bound) {
  if (d < 1) {
    throw std::invalid_argument("poly_error_bound: d must be >= 1");
  }
  const double h = x_max / static_cast<double>(d);
  double factorial = 1.0;
  for (int i = 2; i <= order + 1; ++i) {
    factorial *= i;
  }
  return derivative_bound * std::pow(h, order + 1) / factorial;
}

}  // namespace vqsde
