#include "vqsde/generator.h"

#include <cmath>
#include <stdexcept>

namespace vqsde {

double eval_poly(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    v = v * x + *it;
  }
  return v;
}

ProcessSpec::ProcessSpec(std::vector<double> mu_coeffs,
                         std::vector<double> sigma2_coeffs, double x_max,
                         int n_qubits, InitialDistribution initial)
    : mu_coeffs_(std::move(mu_coeffs)),
      sigma2_coeffs_(std::move(sigma2_coeffs)),
      x_max_(x_max),
      n_qubits_(n_qubits),
      initial_(std::move(initial)) {
  if (n_qubits_ < 1) {
    throw std::invalid_argument("ProcessSpec: n_qubits must be positive");
  }
  if (x_max_ <= 0.0) {
    throw std::invalid_argument("ProcessSpec: x_max must be positive");
  }
  if (mu_coeffs_.empty() || sigma2_coeffs_.empty()) {
    throw std::invalid_argument("ProcessSpec: coefficient vectors nonempty");
  }
  dx_ = x_max_ / static_cast<double>(grid_points() - 1);
  for (std::int64_t i = 0; i < grid_points(); ++i) {
    if (eval_poly(sigma2_coeffs_, grid_x(i)) < 0.0) {
      throw std::invalid_argument(
          "ProcessSpec: sigma^2 negative on the grid");
    }
  }
}

ProcessSpec ProcessSpec::gbm(double r, double sigma, double x_max,
                             int n_qubits, InitialDistribution initial) {
  return ProcessSpec({0.0, r}, {0.0, 0.0, sigma * sigma}, x_max, n_qubits,
                     std::move(initial));
}

ProcessSpec ProcessSpec::ornstein_uhlenbeck(double r, double sigma, double eta,
                                            double x_max, int n_qubits,
                                            InitialDistribution initial) {
  return ProcessSpec({eta * r, -eta}, {sigma * sigma}, x_max, n_qubits,
                     std::move(initial));
}

namespace {

const std::vector<double>& scheduled(
    const std::map<double, std::vector<double>>& schedule,
    const std::vector<double>& base, double t) {
  if (schedule.empty()) {
    return base;
  }
  auto it = schedule.upper_bound(t);
  if (it == schedule.begin()) {
    return base;
  }
  return std::prev(it)->second;
}

}  // namespace

std::vector<double> ProcessSpec::mu_coeffs(double t) const {
  return scheduled(mu_schedule_, mu_coeffs_, t);
}

std::vector<double> ProcessSpec::sigma2_coeffs(double t) const {
  return scheduled(sigma2_schedule_, sigma2_coeffs_, t);
}

double ProcessSpec::mu(double x, double t) const {
  return eval_poly(scheduled(mu_schedule_, mu_coeffs_, t), x);
}

double ProcessSpec::sigma2(double x, double t) const {
  return eval_poly(scheduled(sigma2_schedule_, sigma2_coeffs_, t), x);
}

void ProcessSpec::set_schedule(
    std::map<double, std::vector<double>> mu_schedule,
    std::map<double, std::vector<double>> sigma2_schedule) {
  mu_schedule_ = std::move(mu_schedule);
  sigma2_schedule_ = std::move(sigma2_schedule);
}

LatticeDistribution ProcessSpec::initial_lattice() const {
  const std::int64_t dim = grid_points();
  RVector p = RVector::Zero(dim);
  if (const auto* d = std::get_if<DeltaInitial>(&initial_)) {
    std::int64_t i0 = std::llround(d->x0 / dx_);
    i0 = std::max<std::int64_t>(0, std::min(dim - 1, i0));
    p[i0] = 1.0;
  } else if (const auto* g = std::get_if<GaussianInitial>(&initial_)) {
    if (g->std <= 0.0) {
      throw std::invalid_argument("GaussianInitial: std must be positive");
    }
    for (std::int64_t i = 0; i < dim; ++i) {
      const double z = (grid_x(i) - g->mean) / g->std;
      p[i] = std::exp(-0.5 * z * z);
    }
    p /= p.sum();
  } else {
    const auto& e = std::get<ExplicitInitial>(initial_);
    if (static_cast<std::int64_t>(e.p.size()) != dim) {
      throw std::invalid_argument("ExplicitInitial: wrong length");
    }
    double sum = 0.0;
    for (std::int64_t i = 0; i < dim; ++i) {
      if (e.p[i] < 0.0) {
        throw std::invalid_argument("ExplicitInitial: negative entry");
      }
      p[i] = e.p[i];
      sum += e.p[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("ExplicitInitial: must sum to 1");
    }
  }
  return {p, 0.0};
}

TransitionProbs transition_probs(const ProcessSpec& spec, std::int64_t i,
                                 double t, double dt) {
  if (i < 0 || i >= spec.grid_points()) {
    throw std::out_of_range("transition_probs: grid index out of range");
  }
  if (dt <= 0.0) {
    throw std::invalid_argument("transition_probs: dt must be positive");
  }
  const double x = spec.grid_x(i);
  const double s2 = spec.sigma2(x, t) / (spec.dx() * spec.dx());
  const double m = spec.mu(x, t) / spec.dx();
  TransitionProbs out;
  out.p_u = 0.5 * (s2 + m) * dt;
  out.p_d = 0.5 * (s2 - m) * dt;
  out.p_m = 1.0 - out.p_u - out.p_d;  // sums to 1 by construction
  out.negative = out.p_u < 0.0 || out.p_d < 0.0 || out.p_m < 0.0;
  return out;
}

RMatrix build_L_dense(const ProcessSpec& spec, double t) {
  const std::int64_t dim = spec.grid_points();
  RMatrix L = RMatrix::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k) {
    const double x = spec.grid_x(k);
    const double s2 = spec.sigma2(x, t) / (spec.dx() * spec.dx());
    const double m = spec.mu(x, t) / spec.dx();
    const double up = 0.5 * (s2 + m);
    const double down = 0.5 * (s2 - m);
    if (k + 1 < dim) {
      L(k + 1, k) = up;
    }
    if (k - 1 >= 0) {
      L(k - 1, k) = down;
    }
    // Exact negative of the hop rates: interior columns sum to 0 in floating
    // point, not just in exact arithmetic.
    L(k, k) = -(up + down);
  }
  return L;
}

Circuit cyc_inc(int n) {
  if (n < 1) {
    throw std::invalid_argument("cyc_inc: n must be >= 1");
  }
  // Ripple cascade: flip qubit k when all lower-significance qubits are 1.
  // Each gate's controls sit strictly below its target, so earlier gates do
  // not disturb later controls.
  Circuit c(n);
  for (int k = 0; k < n; ++k) {
    Gate g = Gate::x(k);
    for (int q = k + 1; q < n; ++q) {
      g.controls.push_back(q);
    }
    c.append(std::move(g));
  }
  return c;
}

Circuit cyc_dec(int n) { return cyc_inc(n).adjoint(); }

UnitarySum v_plus(int n) {
  UnitarySum sum(n);
  Circuit inc = cyc_inc(n);
  Circuit with_cnz(n);
  with_cnz.append(Gate::cnz(n));
  with_cnz.append(inc);
  sum.append(0.5, std::move(with_cnz));
  sum.append(0.5, inc);
  return sum;
}

UnitarySum v_minus(int n) {
  UnitarySum sum(n);
  Circuit dec = cyc_dec(n);
  Circuit with_cnz = dec;
  with_cnz.append(Gate::cnz(n));
  sum.append(0.5, std::move(with_cnz));
  sum.append(0.5, dec);
  return sum;
}

std::map<std::uint64_t, double> d_power_terms(int n, int power) {
  if (n < 1 || power < 0) {
    throw std::invalid_argument("d_power_terms: bad arguments");
  }
  // D(n) = c0 I - sum_q w_q Z_q with c0 = (2^n - 1)/2, w_q = 2^{n-q-2}.
  const double c0 = (std::pow(2.0, n) - 1.0) / 2.0;
  std::vector<double> w(n);
  for (int q = 0; q < n; ++q) {
    w[q] = std::pow(2.0, n - q - 2);
  }
  std::map<std::uint64_t, double> terms{{0, 1.0}};
  for (int it = 0; it < power; ++it) {
    std::map<std::uint64_t, double> next;
    for (const auto& [mask, coef] : terms) {
      next[mask] += coef * c0;
      for (int q = 0; q < n; ++q) {
        next[mask ^ (std::uint64_t{1} << q)] -= coef * w[q];
      }
    }
    terms = std::move(next);
  }
  return terms;
}

namespace {

Circuit z_product_circuit(int n, std::uint64_t mask) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) {
    if (mask & (std::uint64_t{1} << q)) {
      c.append(Gate::z(q));
    }
  }
  return c;
}

}  // namespace

UnitarySum d_operator(int n, int power) {
  UnitarySum sum(n);
  for (const auto& [mask, coef] : d_power_terms(n, power)) {
    if (coef != 0.0) {
      sum.append(coef, z_product_circuit(n, mask));
    }
  }
  return sum;
}

UnitarySum build_L_unitary_sum(const ProcessSpec& spec, double t) {
  const int n = spec.n_qubits();
  const double dx = spec.dx();
  UnitarySum sum(n);

  const Circuit inc = cyc_inc(n);
  const Circuit dec = cyc_dec(n);
  const Gate cnz = Gate::cnz(n);

  // Appends coeff * O * D^m where O is built by `tail` acting after the
  // Pauli-Z product of the D^m term.
  auto add_with_d = [&](double coeff, int m,
                        const std::vector<const Circuit*>& tail_circuits,
                        bool tail_cnz_first) {
    for (const auto& [mask, dcoef] : d_power_terms(n, m)) {
      Circuit c = z_product_circuit(n, mask);
      if (tail_cnz_first) {
        c.append(cnz);
      }
      for (const Circuit* tc : tail_circuits) {
        c.append(*tc);
      }
      sum.append(coeff * dcoef, std::move(c));
    }
  };

  const auto s2_coeffs = spec.sigma2_coeffs(t);
  for (std::size_t m = 0; m < s2_coeffs.size(); ++m) {
    const double a = s2_coeffs[m];
    if (a == 0.0) {
      continue;
    }
    const double b =
        a * std::pow(dx, static_cast<double>(m) - 2.0);
    // ((V+ + V-)/2 - I) D^m
    add_with_d(0.25 * b, static_cast<int>(m), {&inc}, true);   // CycInc.CnZ
    add_with_d(0.25 * b, static_cast<int>(m), {&inc}, false);  // CycInc
    add_with_d(0.25 * b, static_cast<int>(m), {&dec}, false);
    {
      // CnZ . CycDec term needs the CnZ after CycDec.
      for (const auto& [mask, dcoef] : d_power_terms(n, static_cast<int>(m))) {
        Circuit c = z_product_circuit(n, mask);
        c.append(dec);
        c.append(cnz);
        sum.append(0.25 * b * dcoef, std::move(c));
      }
    }
    add_with_d(-b, static_cast<int>(m), {}, false);  // -I D^m
  }

  const auto mu_coeffs = spec.mu_coeffs(t);
  for (std::size_t m = 0; m < mu_coeffs.size(); ++m) {
    const double a = mu_coeffs[m];
    if (a == 0.0) {
      continue;
    }
    const double b =
        a * std::pow(dx, static_cast<double>(m) - 1.0);
    // (V+ - V-)/2 . D^m; the drift part carries no diagonal term.
    add_with_d(0.25 * b, static_cast<int>(m), {&inc}, true);
    add_with_d(0.25 * b, static_cast<int>(m), {&inc}, false);
    add_with_d(-0.25 * b, static_cast<int>(m), {&dec}, false);
    for (const auto& [mask, dcoef] : d_power_terms(n, static_cast<int>(m))) {
      Circuit c = z_product_circuit(n, mask);
      c.append(dec);
      c.append(cnz);
      sum.append(-0.25 * b * dcoef, std::move(c));
    }
  }
  return sum;
}

GateCountReport decomposition_gate_report(const UnitarySum& op) {
  GateCountReport report{op.term_count(), 0};
  for (const UnitaryTerm& t : op.terms()) {
    for (const Gate& g : t.circuit.gates()) {
      const std::size_t c = g.controls.size();
      // Multi-controlled gates compiled without ancillas cost O(c^2)
      // Toffoli/CNOT/single-qubit gates; plain gates cost one.
      report.compiled_gates += c <= 1 ? 1 : c * c;
    }
  }
  return report;
}

}  // namespace vqsde
