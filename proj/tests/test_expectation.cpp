#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "vqsde/expectation.h"
#include "vqsde/generator.h"

using namespace vqsde;

namespace {

// Amplitude vector an indicator/payoff sum produces from |0...0>.
RVector action_on_zero(const UnitarySum& op, int n) {
  const StateVector out = apply_unitary_sum(StateVector::zero_state(n), op);
  return out.amplitudes().real();
}

StateVector embed(const RVector& p) {
  int n = 0;
  while ((std::int64_t{1} << n) < p.size()) ++n;
  CVector amps = p.cast<Complex>();
  return StateVector(n, amps);
}

PiecewisePoly random_piecewise(std::mt19937_64& rng, double x_max) {
  std::uniform_int_distribution<int> npieces(1, 4);
  std::uniform_int_distribution<int> deg(0, 2);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  const int d = npieces(rng);
  PiecewisePoly f;
  f.breakpoints.push_back(0.0);
  std::set<double> cuts;
  while (static_cast<int>(cuts.size()) < d - 1) {
    cuts.insert(x_max * std::uniform_real_distribution<double>(0.1, 0.9)(rng));
  }
  for (double c : cuts) f.breakpoints.push_back(c);
  f.breakpoints.push_back(x_max);
  for (int k = 0; k < d; ++k) {
    std::vector<double> c(deg(rng) + 1);
    for (double& v : c) v = coef(rng);
    f.coeffs.push_back(c);
  }
  return f;
}

}  // namespace

TEST_CASE("prefix indicator at special endpoints") {
  // Full-range prefix collapses to a single all-H term.
  const auto full = indicator_prefix(7.0, 3, 1.0);
  CHECK(full.op.term_count() == 1);
  CHECK(std::abs(full.op.terms()[0].coefficient.real() -
                 std::sqrt(8.0)) < 1e-12);

  // Prefix of just the origin is the identity on |0>.
  const auto origin = indicator_prefix(0.0, 3, 1.0);
  const RVector v = action_on_zero(origin.op, 3);
  CHECK(std::abs(v[0] - 1.0) < 1e-12);
  for (int i = 1; i < 8; ++i) CHECK(std::abs(v[i]) < 1e-12);
}

TEST_CASE("prefix indicator uses few dyadic blocks") {
  // [0, 5] on 8 points = block of 4 + block of 2: two terms.
  const auto pre = indicator_prefix(5.0, 3, 1.0);
  CHECK(pre.op.term_count() == 2);
  const RVector v = action_on_zero(pre.op, 3);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(v[i] - (i <= 5 ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("prefix indicator brute force over every grid endpoint") {
  for (int n = 1; n <= 5; ++n) {
    const std::int64_t dim = std::int64_t{1} << n;
    const double dx = 0.5;
    for (std::int64_t a = 0; a < dim; ++a) {
      const auto pre = indicator_prefix(static_cast<double>(a) * dx, n, dx);
      const RVector v = action_on_zero(pre.op, n);
      for (std::int64_t i = 0; i < dim; ++i) {
        CHECK(std::abs(v[i] - (i <= a ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("interval indicators partition the grid") {
  const auto mid = indicator_interval(1.0, 5.0, 3, 1.0);
  const RVector v = action_on_zero(mid.op, 3);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(v[i] - (i >= 2 && i <= 5 ? 1.0 : 0.0)) < 1e-10);
  }

  // Telescoping partition sums to the all-ones vector exactly.
  RVector total = RVector::Zero(8);
  const double cuts[] = {0.0, 2.0, 3.0, 7.0};
  for (int k = 0; k + 1 < 4; ++k) {
    total += action_on_zero(
        indicator_interval(cuts[k], cuts[k + 1], 3, 1.0).op, 3);
  }
  for (int i = 0; i < 8; ++i) CHECK(std::abs(total[i] - 1.0) < 1e-10);

  const auto empty = indicator_interval(3.0, 3.0, 3, 1.0);
  CHECK(empty.empty_warning);
}

TEST_CASE("payoff operator embeds f on the grid") {
  const int n = 3;
  const double dx = 1.0;

  const PayoffOperator one = build_Sf(PiecewisePoly::constant(1.0, 7.0), n, dx);
  CHECK(one.shift == 0.0);
  const RVector v1 = action_on_zero(one.op, n);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(v1[i] - 1.0) < 1e-10);

  PiecewisePoly linear{{0.0, 7.0}, {{0.0, 1.0}}};
  const RVector vx = action_on_zero(build_Sf(linear, n, dx).op, n);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(vx[i] - i) < 1e-10);

  const PayoffOperator call = build_Sf(PiecewisePoly::call(2.0, 7.0), n, dx);
  CHECK(call.shift == 0.0);
  const RVector vc = action_on_zero(call.op, n);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(vc[i] - std::max(static_cast<double>(i) - 2.0, 0.0)) <
          1e-10);
  }
}

TEST_CASE("payoff operator matches random piecewise polynomials") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const double x_max = 6.0;
    const double dx = x_max / static_cast<double>((1 << n) - 1);
    // Grid-aligned breakpoints keep the check exact.
    PiecewisePoly f = random_piecewise(rng, x_max);
    for (std::size_t k = 1; k + 1 < f.breakpoints.size(); ++k) {
      f.breakpoints[k] = dx * std::floor(f.breakpoints[k] / dx);
    }
    const PayoffOperator sf = build_Sf(f, n, dx);
    const RVector v = action_on_zero(sf.op, n);
    for (int i = 0; i < (1 << n); ++i) {
      const double x = dx * i;
      CHECK(std::abs(v[i] - (f(x) + sf.shift)) < 1e-10);
    }
  }
}

TEST_CASE("off-grid breakpoints are snapped with a flag") {
  PiecewisePoly f{{0.0, 2.3, 7.0}, {{1.0}, {0.0}}};
  const PayoffOperator sf = build_Sf(f, 3, 1.0);
  CHECK(sf.snapped_breakpoints);
}

TEST_CASE("exact expectation values") {
  const int n = 3;
  const PayoffOperator one = build_Sf(PiecewisePoly::constant(1.0, 7.0), n, 1.0);
  RVector uniform = RVector::Constant(8, 1.0 / 8.0);
  CHECK(std::abs(expectation_exact(embed(uniform), one) - 1.0) < 1e-12);

  const PayoffOperator call = build_Sf(PiecewisePoly::call(2.0, 7.0), n, 1.0);
  // Uniform over {0..7}: mean of max(i-2, 0) = 15/8.
  CHECK(std::abs(expectation_exact(embed(uniform), call) - 1.875) < 1e-12);

  PiecewisePoly linear{{0.0, 7.0}, {{0.0, 1.0}}};
  RVector delta = RVector::Zero(8);
  delta[5] = 1.0;
  CHECK(std::abs(expectation_exact(embed(delta),
                                   build_Sf(linear, n, 1.0)) - 5.0) < 1e-12);

  // A hand-built unshifted negative payoff must be rejected.
  UnitarySum neg(n);
  neg.append(-1.0, Circuit(n));
  CHECK_THROWS(expectation_exact(embed(uniform), PayoffOperator{neg, 0.0}));
}

TEST_CASE("sampled expectation agrees with the exact value") {
  const int n = 3;
  Circuit prep(n);
  for (int q = 0; q < n; ++q) prep.append(Gate::h(q));
  const double alpha = 1.0 / std::sqrt(8.0);

  // Constant payoff: every sampled path is deterministic.
  const PayoffOperator one = build_Sf(PiecewisePoly::constant(1.0, 7.0), n, 1.0);
  const SampledExpectation c = expectation_sampled(prep, alpha, one, 2000, 3);
  CHECK(std::abs(c.estimate - 1.0) < 0.05);

  const PayoffOperator call = build_Sf(PiecewisePoly::call(2.0, 7.0), n, 1.0);
  const SampledExpectation s = expectation_sampled(prep, alpha, call, 100000, 7);
  CHECK(std::abs(s.estimate - 1.875) < 3.0 * s.stderr_estimate + 1e-9);
  CHECK(s.stderr_estimate > 0.0);

  // stderr should scale roughly as 1/sqrt(shots).
  const SampledExpectation lo = expectation_sampled(prep, alpha, call, 1000, 11);
  const SampledExpectation hi =
      expectation_sampled(prep, alpha, call, 100000, 11);
  const double ratio = lo.stderr_estimate / hi.stderr_estimate;
  CHECK(ratio > 10.0 / 1.5);
  CHECK(ratio < 10.0 * 1.5);
}

TEST_CASE("measurement budget arithmetic") {
  RVector p1 = RVector::Ones(1);
  const MeasurementBudget unit = measurement_budget(1.0, p1, {1.0}, 0.1);
  // gamma = 2E / (sum p^2 * 2 (sum |xi|)^2) = 2 / (1 * 2) = 1.
  CHECK(std::abs(unit.gamma - 1.0) < 1e-12);
  CHECK(std::abs(unit.eps_per_term - 0.1) < 1e-12);
  CHECK(unit.shots_per_term == 100);
  CHECK(unit.n_unitaries == 2);
  CHECK(unit.qpe_measurements >= 4);
  CHECK(unit.qpe_depth == 10);

  RVector uniform = RVector::Constant(16, 1.0 / 16.0);
  const MeasurementBudget u = measurement_budget(1.0, uniform, {1.0, 2.0}, 0.1);
  // sum p^2 = 1/16, sum beta = 2 * 9 = 18 -> gamma = 2 / (18/16).
  CHECK(std::abs(u.gamma - 32.0 / 18.0) < 1e-12);
  CHECK(u.n_unitaries == 8);

  CHECK_THROWS(measurement_budget(1.0, p1, {}, 0.1));
}

TEST_CASE("piecewise fit error bound") {
  // A first-order fit reproduces linear payoffs exactly.
  CHECK(poly_error_bound(4, 1, 8.0, 0.0) == 0.0);
  // f = x^2, |f''| = 2, d = 4 on [0, 1]: 2 * (1/4)^2 / 2 = 1/16.
  CHECK(std::abs(poly_error_bound(4, 1, 1.0, 2.0) - 0.0625) < 1e-15);

  // Empirical check: linear interpolation of x^2 stays under the bound.
  const double x_max = 1.0;
  for (int d : {2, 4, 8}) {
    const double h = x_max / d;
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
      const double a = k * h;
      for (int j = 0; j <= 50; ++j) {
        const double x = a + h * j / 50.0;
        const double fit = a * a + 2.0 * a * (x - a);  // Taylor at a
        worst = std::max(worst, std::abs(x * x - fit));
      }
    }
    CHECK(worst <= poly_error_bound(d, 1, x_max, 2.0) + 1e-15);
  }
}
