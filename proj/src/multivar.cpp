#include "vqsde/multivar.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vqsde {

namespace {

std::vector<double> poly_square(const std::vector<double>& a) {
  std::vector<double> out(2 * a.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      out[i + j] += a[i] * a[j];
    }
  }
  return out;
}

}  // namespace

MultiProcessSpec::MultiProcessSpec(std::vector<MultiDimSpec> dims, RMatrix rho)
    : dims_(std::move(dims)), rho_(std::move(rho)) {
  const int d_count = static_cast<int>(dims_.size());
  if (d_count < 1) {
    throw std::invalid_argument("MultiProcessSpec: need at least 1 dimension");
  }
  if (rho_.rows() != d_count || rho_.cols() != d_count) {
    throw std::invalid_argument("MultiProcessSpec: rho must be D x D");
  }
  for (int k = 0; k < d_count; ++k) {
    if (std::abs(rho_(k, k) - 1.0) > 1e-12) {
      throw std::invalid_argument("MultiProcessSpec: rho diagonal must be 1");
    }
    for (int l = 0; l < d_count; ++l) {
      if (std::abs(rho_(k, l) - rho_(l, k)) > 1e-12 ||
          std::abs(rho_(k, l)) > 1.0 + 1e-12) {
        throw std::invalid_argument("MultiProcessSpec: rho not a correlation");
      }
    }
  }
  total_qubits_ = 0;
  for (const MultiDimSpec& d : dims_) {
    if (d.n_qubits < 1 || d.x_max <= 0.0 || d.mu_coeffs.empty() ||
        d.sigma_coeffs.empty()) {
      throw std::invalid_argument("MultiProcessSpec: malformed dimension");
    }
    offsets_.push_back(total_qubits_);
    total_qubits_ += d.n_qubits;
    sigma2_coeffs_.push_back(poly_square(d.sigma_coeffs));
  }
}

double MultiProcessSpec::mu(int d, double x) const {
  return eval_poly(dims_[d].mu_coeffs, x);
}

double MultiProcessSpec::sigma(int d, double x) const {
  return eval_poly(dims_[d].sigma_coeffs, x);
}

std::vector<std::int64_t> MultiProcessSpec::unflatten(
    std::int64_t index) const {
  std::vector<std::int64_t> out(dims_.size());
  for (int d = dimension_count() - 1; d >= 0; --d) {
    out[d] = index % dims_[d].grid_points();
    index /= dims_[d].grid_points();
  }
  return out;
}

std::int64_t MultiProcessSpec::flatten(
    const std::vector<std::int64_t>& index) const {
  std::int64_t out = 0;
  for (int d = 0; d < dimension_count(); ++d) {
    out = out * dims_[d].grid_points() + index[d];
  }
  return out;
}

MultiTransition multi_transition_probs(const MultiProcessSpec& spec,
                                       const std::vector<std::int64_t>& index,
                                       double t, double dt) {
  (void)t;
  const int dcount = spec.dimension_count();
  if (static_cast<int>(index.size()) != dcount) {
    throw std::invalid_argument("multi_transition_probs: index arity");
  }
  if (dt <= 0.0) {
    throw std::invalid_argument("multi_transition_probs: dt must be positive");
  }
  std::vector<double> x(dcount), sig(dcount);
  for (int d = 0; d < dcount; ++d) {
    if (index[d] < 0 || index[d] >= spec.dim(d).grid_points()) {
      throw std::out_of_range("multi_transition_probs: index out of range");
    }
    x[d] = spec.dim(d).grid_x(index[d]);
    sig[d] = spec.sigma(d, x[d]);
  }
  MultiTransition out;
  out.p_u.resize(dcount);
  out.p_d.resize(dcount);
  out.p_uu = RMatrix::Zero(dcount, dcount);
  for (int k = 0; k < dcount; ++k) {
    for (int l = 0; l < dcount; ++l) {
      if (k != l) {
        out.p_uu(k, l) = spec.rho()(k, l) * sig[k] * sig[l] /
                         (spec.dim(k).dx() * spec.dim(l).dx()) * dt;
      }
    }
  }
  out.p_m = 1.0;
  for (int d = 0; d < dcount; ++d) {
    const double dx = spec.dim(d).dx();
    const double s2 = eval_poly(spec.sigma2_coeffs(d), x[d]) / (dx * dx);
    const double m = spec.mu(d, x[d]) / dx;
    double corr = 0.0;
    for (int k = 0; k < dcount; ++k) {
      if (k != d) {
        corr += out.p_uu(d, k);
      }
    }
    // Up hops absorb the pair-move weight so the moments stay matched.
    out.p_u[d] = 0.5 * (s2 + m) * dt - corr;
    out.p_d[d] = 0.5 * (s2 - m) * dt;
    out.p_m = out.p_m - out.p_u[d] - out.p_d[d];
  }
  for (int k = 0; k < dcount; ++k) {
    for (int l = 0; l < dcount; ++l) {
      if (k != l) {
        out.p_m -= out.p_uu(k, l);
      }
    }
  }
  out.negative = out.p_m < 0.0;
  for (int d = 0; d < dcount; ++d) {
    out.negative = out.negative || out.p_u[d] < 0.0 || out.p_d[d] < 0.0;
  }
  for (int k = 0; k < dcount; ++k) {
    for (int l = 0; l < dcount; ++l) {
      out.negative = out.negative || out.p_uu(k, l) < 0.0;
    }
  }
  return out;
}

RMatrix build_L_multi_dense(const MultiProcessSpec& spec, double t,
                            int max_qubits) {
  (void)t;
  if (spec.total_qubits() > max_qubits) {
    throw std::invalid_argument("build_L_multi_dense: qubit cap exceeded");
  }
  const int dcount = spec.dimension_count();
  const std::int64_t dim = spec.total_points();
  RMatrix L = RMatrix::Zero(dim, dim);
  std::vector<std::int64_t> strides(dcount, 1);
  for (int d = dcount - 2; d >= 0; --d) {
    strides[d] = strides[d + 1] * spec.dim(d + 1).grid_points();
  }
  for (std::int64_t j = 0; j < dim; ++j) {
    const std::vector<std::int64_t> idx = spec.unflatten(j);
    std::vector<double> x(dcount), sig(dcount);
    for (int d = 0; d < dcount; ++d) {
      x[d] = spec.dim(d).grid_x(idx[d]);
      sig[d] = spec.sigma(d, x[d]);
    }
    // Canonical rate accumulation: per dimension up then down, then the
    // pair hops. The diagonal is the exact negative of that sum, so interior
    // columns cancel to 0 in floating point.
    double rate_sum = 0.0;
    for (int d = 0; d < dcount; ++d) {
      const double dx = spec.dim(d).dx();
      const double s2 = eval_poly(spec.sigma2_coeffs(d), x[d]) / (dx * dx);
      const double m = spec.mu(d, x[d]) / dx;
      double corr = 0.0;
      for (int k = 0; k < dcount; ++k) {
        if (k != d) {
          corr += spec.rho()(d, k) * sig[d] * sig[k] /
                  (dx * spec.dim(k).dx());
        }
      }
      const double up = 0.5 * (s2 + m) - corr;
      const double down = 0.5 * (s2 - m);
      if (idx[d] + 1 < spec.dim(d).grid_points()) {
        L(j + strides[d], j) += up;
      }
      if (idx[d] >= 1) {
        L(j - strides[d], j) += down;
      }
      rate_sum += up;
      rate_sum += down;
    }
    for (int k = 0; k < dcount; ++k) {
      for (int l = k + 1; l < dcount; ++l) {
        const double q = spec.rho()(k, l) * sig[k] * sig[l] /
                         (spec.dim(k).dx() * spec.dim(l).dx());
        const double pair_rate = q + q;  // both orderings hit the same node
        if (idx[k] + 1 < spec.dim(k).grid_points() &&
            idx[l] + 1 < spec.dim(l).grid_points()) {
          L(j + strides[k] + strides[l], j) += pair_rate;
        }
        rate_sum += pair_rate;
      }
    }
    L(j, j) += -rate_sum;
  }
  return L;
}

namespace {

void append_z_product(Circuit& c, std::uint64_t mask, int offset) {
  for (int q = 0; mask >> q; ++q) {
    if (mask & (std::uint64_t{1} << q)) {
      c.append(Gate::z(offset + q));
    }
  }
}

}  // namespace

UnitarySum build_L_multi_unitary_sum(const MultiProcessSpec& spec, double t) {
  const int dcount = spec.dimension_count();
  const int n_total = spec.total_qubits();
  UnitarySum sum(n_total);

  // Per-dimension single-hop structure is exactly the one-dimensional
  // construction shifted into the dimension's qubit block.
  for (int d = 0; d < dcount; ++d) {
    const MultiDimSpec& ds = spec.dim(d);
    const ProcessSpec one(ds.mu_coeffs, spec.sigma2_coeffs(d), ds.x_max,
                          ds.n_qubits, DeltaInitial{0.0});
    const UnitarySum block = build_L_unitary_sum(one, t);
    for (const UnitaryTerm& term : block.terms()) {
      sum.append(term.coefficient,
                 term.circuit.shifted(spec.qubit_offset(d), n_total));
    }
  }
  if (dcount == 1) {
    return sum;
  }

  std::vector<Circuit> inc, cnz;
  for (int d = 0; d < dcount; ++d) {
    inc.push_back(cyc_inc(spec.dim(d).n_qubits)
                      .shifted(spec.qubit_offset(d), n_total));
    Circuit c(spec.dim(d).n_qubits);
    c.append(Gate::cnz(spec.dim(d).n_qubits));
    cnz.push_back(c.shifted(spec.qubit_offset(d), n_total));
  }

  // Coupled terms per ordered pair (k, l): the up-hop correction on
  // dimension k (weight sigma_k(x_k) sigma_l(x_l), hence index polynomials
  // of both blocks) and the both-up pair hop.
  for (int k = 0; k < dcount; ++k) {
    for (int l = 0; l < dcount; ++l) {
      if (k == l || spec.rho()(k, l) == 0.0) {
        continue;
      }
      const std::vector<double>& ak = spec.dim(k).sigma_coeffs;
      const std::vector<double>& al = spec.dim(l).sigma_coeffs;
      for (std::size_t ma = 0; ma < ak.size(); ++ma) {
        for (std::size_t mb = 0; mb < al.size(); ++mb) {
          if (ak[ma] == 0.0 || al[mb] == 0.0) {
            continue;
          }
          const double b =
              spec.rho()(k, l) * ak[ma] * al[mb] *
              std::pow(spec.dim(k).dx(), static_cast<double>(ma) - 1.0) *
              std::pow(spec.dim(l).dx(), static_cast<double>(mb) - 1.0);
          const auto dk = d_power_terms(spec.dim(k).n_qubits,
                                        static_cast<int>(ma));
          const auto dl = d_power_terms(spec.dim(l).n_qubits,
                                        static_cast<int>(mb));
          for (const auto& [mask_k, ck] : dk) {
            for (const auto& [mask_l, cl] : dl) {
              const double w = b * ck * cl;
              // -V+^{(k)} D_k^{ma} D_l^{mb}: up-hop correction.
              for (int tail = 0; tail < 2; ++tail) {
                Circuit c(n_total);
                append_z_product(c, mask_k, spec.qubit_offset(k));
                append_z_product(c, mask_l, spec.qubit_offset(l));
                if (tail == 0) {
                  c.append(cnz[k]);
                }
                c.append(inc[k]);
                sum.append(-0.5 * w, std::move(c));
              }
              // +V+^{(k)} D_k^{ma} V+^{(l)} D_l^{mb}: both-up hop.
              for (int tail_k = 0; tail_k < 2; ++tail_k) {
                for (int tail_l = 0; tail_l < 2; ++tail_l) {
                  Circuit c(n_total);
                  append_z_product(c, mask_k, spec.qubit_offset(k));
                  append_z_product(c, mask_l, spec.qubit_offset(l));
                  if (tail_l == 0) {
                    c.append(cnz[l]);
                  }
                  c.append(inc[l]);
                  if (tail_k == 0) {
                    c.append(cnz[k]);
                  }
                  c.append(inc[k]);
                  sum.append(0.25 * w, std::move(c));
                }
              }
            }
          }
        }
      }
    }
  }
  return sum;
}

MultiPiecewisePoly MultiPiecewisePoly::constant(
    double c, const std::vector<double>& x_maxes) {
  MultiPiecewisePoly f;
  for (double xm : x_maxes) {
    f.breakpoints.push_back({0.0, xm});
  }
  f.regions.push_back(
      {{c, std::vector<int>(x_maxes.size(), 0)}});
  return f;
}

double MultiPiecewisePoly::operator()(const std::vector<double>& x) const {
  const int dcount = static_cast<int>(breakpoints.size());
  std::int64_t region = 0;
  for (int d = 0; d < dcount; ++d) {
    int k = 0;
    for (std::size_t i = 1; i + 1 < breakpoints[d].size(); ++i) {
      if (x[d] > breakpoints[d][i]) {
        k = static_cast<int>(i);
      }
    }
    region = region * static_cast<std::int64_t>(breakpoints[d].size() - 1) + k;
  }
  double v = 0.0;
  for (const MultiMonomial& m : regions[region]) {
    double term = m.coeff;
    for (int d = 0; d < dcount; ++d) {
      term *= std::pow(x[d], m.exponents[d]);
    }
    v += term;
  }
  return v;
}

PayoffOperator build_multi_Sf(const MultiPiecewisePoly& f,
                              const MultiProcessSpec& spec) {
  const int dcount = spec.dimension_count();
  if (static_cast<int>(f.breakpoints.size()) != dcount) {
    throw std::invalid_argument("build_multi_Sf: dimension mismatch");
  }
  if (spec.total_qubits() > 16) {
    throw std::invalid_argument("build_multi_Sf: qubit cap exceeded");
  }
  PayoffOperator out{UnitarySum(spec.total_qubits())};

  // Snapped per-dimension index bounds; interval k of dimension d covers
  // grid indices (bounds[d][k], bounds[d][k+1]].
  std::vector<std::vector<std::int64_t>> bounds(dcount);
  std::vector<std::int64_t> region_counts(dcount);
  std::int64_t total_regions = 1;
  for (int d = 0; d < dcount; ++d) {
    const auto& bp = f.breakpoints[d];
    if (bp.size() < 2 || bp.front() != 0.0) {
      throw std::invalid_argument("build_multi_Sf: bad breakpoints");
    }
    bounds[d].resize(bp.size());
    for (std::size_t k = 0; k < bp.size(); ++k) {
      const double ratio = bp[k] / spec.dim(d).dx();
      bounds[d][k] = std::llround(ratio);
      if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        out.snapped_breakpoints = true;
      }
    }
    bounds[d].front() = -1;
    bounds[d].back() =
        std::max(bounds[d].back(), spec.dim(d).grid_points() - 1);
    region_counts[d] = static_cast<std::int64_t>(bp.size()) - 1;
    total_regions *= region_counts[d];
  }
  if (static_cast<std::int64_t>(f.regions.size()) != total_regions) {
    throw std::invalid_argument("build_multi_Sf: region count mismatch");
  }

  auto region_interval = [&](int d, std::int64_t i) {
    for (std::int64_t k = 0; k < region_counts[d]; ++k) {
      if (i > bounds[d][k] && i <= bounds[d][k + 1]) {
        return k;
      }
    }
    return region_counts[d] - 1;
  };
  auto monomial_value = [&](const MultiMonomial& m,
                            const std::vector<std::int64_t>& idx) {
    double v = m.coeff;
    for (int d = 0; d < dcount; ++d) {
      v *= std::pow(spec.dim(d).grid_x(idx[d]), m.exponents[d]);
    }
    return v;
  };

  double min_val = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < spec.total_points(); ++i) {
    const std::vector<std::int64_t> idx = spec.unflatten(i);
    std::int64_t region = 0;
    for (int d = 0; d < dcount; ++d) {
      region = region * region_counts[d] + region_interval(d, idx[d]);
    }
    double v = 0.0;
    for (const MultiMonomial& m : f.regions[region]) {
      v += monomial_value(m, idx);
    }
    min_val = std::min(min_val, v);
  }
  out.shift = min_val < 0.0 ? -min_val : 0.0;

  // Region loop: tensor product of per-dimension interval indicators,
  // combined with each monomial's per-dimension index-power terms.
  std::vector<std::int64_t> region_idx(dcount, 0);
  for (std::int64_t r = 0; r < total_regions; ++r) {
    std::int64_t rest = r;
    bool empty = false;
    for (int d = dcount - 1; d >= 0; --d) {
      region_idx[d] = rest % region_counts[d];
      rest /= region_counts[d];
      if (bounds[d][region_idx[d] + 1] <= bounds[d][region_idx[d]]) {
        empty = true;
      }
    }
    if (empty) {
      continue;
    }
    std::vector<std::vector<UnitaryTerm>> chi(dcount);
    for (int d = 0; d < dcount; ++d) {
      const double dx = spec.dim(d).dx();
      const double lo =
          bounds[d][region_idx[d]] < 0
              ? 0.0
              : dx * static_cast<double>(bounds[d][region_idx[d]]);
      const double hi = dx * static_cast<double>(bounds[d][region_idx[d] + 1]);
      const IndicatorDecomposition ind =
          indicator_interval(lo, hi, spec.dim(d).n_qubits, dx);
      for (const UnitaryTerm& term : ind.op.terms()) {
        chi[d].push_back(
            {term.coefficient,
             term.circuit.shifted(spec.qubit_offset(d),
                                  spec.total_qubits())});
      }
    }

    std::vector<MultiMonomial> monos = f.regions[r];
    if (out.shift != 0.0) {
      monos.push_back({out.shift, std::vector<int>(dcount, 0)});
    }
    for (const MultiMonomial& m : monos) {
      if (m.coeff == 0.0) {
        continue;
      }
      double scaled = m.coeff;
      std::vector<std::vector<std::pair<std::uint64_t, double>>> dterms(
          dcount);
      for (int d = 0; d < dcount; ++d) {
        scaled *= std::pow(spec.dim(d).dx(), m.exponents[d]);
        for (const auto& [mask, coef] :
             d_power_terms(spec.dim(d).n_qubits, m.exponents[d])) {
          dterms[d].push_back({mask, coef});
        }
      }
      // Cartesian product over indicator terms and index-power terms.
      std::vector<std::size_t> ci(dcount, 0), di(dcount, 0);
      bool done = false;
      while (!done) {
        double coeff = scaled;
        Circuit c(spec.total_qubits());
        for (int d = 0; d < dcount; ++d) {
          coeff *= std::real(chi[d][ci[d]].coefficient) *
                   dterms[d][di[d]].second;
          c.append(chi[d][ci[d]].circuit);
        }
        for (int d = 0; d < dcount; ++d) {
          append_z_product(c, dterms[d][di[d]].first, spec.qubit_offset(d));
        }
        out.op.append(coeff, std::move(c));
        // Odometer over (ci, di).
        int d = 0;
        for (; d < 2 * dcount; ++d) {
          auto& v = d < dcount ? ci[d] : di[d - dcount];
          const std::size_t lim =
              d < dcount ? chi[d].size() : dterms[d - dcount].size();
          if (++v < lim) {
            break;
          }
          v = 0;
        }
        done = d == 2 * dcount;
      }
    }
  }
  return out;
}

}  // namespace vqsde
