#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vqsde/oracle.h"

using namespace vqsde;

namespace {

LatticeDistribution two_state(double a, double b) {
  RVector p(2);
  p << a, b;
  return {p, 0.0};
}

}  // namespace

TEST_CASE("zero generator leaves the state fixed") {
  RVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const MatrixProvider zero = [](double) { return RMatrix::Zero(4, 4); };
  const Trajectory tr = runge_kutta(zero, {p, 0.0}, 1.0, 0.1);
  CHECK((tr.back().p - p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tr.back().t == 1.0);
}

TEST_CASE("two-state relaxation matches the closed form") {
  RMatrix l(2, 2);
  l << -1.0, 1.0, 1.0, -1.0;
  const MatrixProvider prov = [l](double) { return l; };
  const Trajectory tr = runge_kutta(prov, two_state(1.0, 0.0), 1.0, 0.01);
  const double p0 = 0.5 * (1.0 + std::exp(-2.0));
  CHECK(std::abs(tr.back().p[0] - p0) < 1e-8);
  CHECK(std::abs(tr.back().p[1] - (1.0 - p0)) < 1e-8);
}

TEST_CASE("fourth-order convergence in the step size") {
  RMatrix l(2, 2);
  l << -1.0, 1.0, 1.0, -1.0;
  const MatrixProvider prov = [l](double) { return l; };
  const double exact = 0.5 * (1.0 + std::exp(-2.0));
  const double e_coarse =
      std::abs(runge_kutta(prov, two_state(1.0, 0.0), 1.0, 0.2).back().p[0] -
               exact);
  const double e_fine =
      std::abs(runge_kutta(prov, two_state(1.0, 0.0), 1.0, 0.1).back().p[0] -
               exact);
  const double ratio = e_coarse / e_fine;
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("diverging state reports the failing step") {
  const MatrixProvider blow = [](double) {
    RMatrix l(1, 1);
    l << 1e300;
    return l;
  };
  RVector p(1);
  p << 1.0;
  bool threw = false;
  try {
    runge_kutta(blow, {p, 0.0}, 1.0, 0.5);
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("closed-form moments") {
  const GbmParams gbm{0.1, 0.2, 5.0};
  const Moments at0 = analytic_moments(gbm, 0.0);
  CHECK(at0.mean == 5.0);
  CHECK(at0.variance == 0.0);
  const Moments at4 = analytic_moments(gbm, 4.0);
  CHECK(std::abs(at4.mean - 5.0 * std::exp(0.4)) < 1e-12);
  CHECK(std::abs(at4.variance -
                 25.0 * std::exp(0.8) * std::expm1(0.04 * 4.0)) < 1e-12);

  // Mean reversion started at the target never moves its mean.
  const OuParams pinned{7.0, 0.5, 0.01, 7.0};
  CHECK(std::abs(analytic_moments(pinned, 3.0).mean - 7.0) < 1e-12);
  const OuParams off{7.0, 0.5, 0.01, 4.0};
  CHECK(std::abs(analytic_moments(off, 2.0).mean -
                 (7.0 + (4.0 - 7.0) * std::exp(-0.02))) < 1e-12);

  // eta -> 0 reduces to Brownian motion with drift-free variance.
  const OuParams flat{7.0, 0.5, 0.0, 4.0};
  CHECK(std::abs(analytic_moments(flat, 3.0).variance - 0.25 * 3.0) < 1e-12);
}

TEST_CASE("Monte Carlo with zero noise follows the drift") {
  // dX = 1 dt from x0 = 2: lands at 4 after t = 2, deterministic paths.
  const ProcessSpec spec({1.0}, {0.0}, 15.0, 4, DeltaInitial{2.0});
  const McResult mc = euler_maruyama_mc(spec, 200, 0.01, 2.0, 5);
  CHECK(mc.clipped_mass == 0.0);
  CHECK(mc.distribution.p[4] == 1.0);
}

TEST_CASE("Monte Carlo GBM mean lands in the CLT band") {
  const ProcessSpec spec = ProcessSpec::gbm(0.1, 0.2, 60.0, 6,
                                            DeltaInitial{5.0});
  const std::int64_t paths = 50000;
  const McResult mc = euler_maruyama_mc(spec, paths, 0.005, 4.0, 11);
  CHECK(mc.clipped_mass < 0.01);
  const DistributionStats stats =
      distribution_stats(mc.distribution.p, spec.dx());
  const Moments want = analytic_moments(GbmParams{0.1, 0.2, 5.0}, 4.0);
  const double band =
      4.0 * std::sqrt(want.variance / static_cast<double>(paths));
  // Nearest-bin rounding adds at most dx/2 of extra bias.
  CHECK(std::abs(stats.mean - want.mean) < band + 0.5 * spec.dx());
}

TEST_CASE("Monte Carlo and master-equation histograms agree") {
  const ProcessSpec spec = ProcessSpec::gbm(0.1, 0.2, 15.0, 4,
                                            DeltaInitial{7.5});
  const Trajectory rk = runge_kutta(spec, 1.0, 1e-3);
  const McResult mc = euler_maruyama_mc(spec, 50000, 0.005, 1.0, 17);
  const double tv = 0.5 * (rk.back().p - mc.distribution.p).cwiseAbs().sum();
  CHECK(tv < 0.05);  // tree vs continuum discretization band
}

TEST_CASE("distribution statistics") {
  RVector delta = RVector::Zero(8);
  delta[3] = 1.0;
  const DistributionStats d = distribution_stats(delta, 1.0);
  CHECK(d.mass == 1.0);
  CHECK(d.mean == 3.0);
  CHECK(d.variance == 0.0);

  RVector uniform = RVector::Constant(4, 0.25);
  const DistributionStats u = distribution_stats(uniform, 1.0);
  CHECK(std::abs(u.mean - 1.5) < 1e-14);
  CHECK(std::abs(u.variance - 1.25) < 1e-14);

  // Grid-spacing homogeneity: mean scales by dx, variance by dx^2.
  const DistributionStats s = distribution_stats(uniform, 0.5);
  CHECK(std::abs(s.mean - 0.75) < 1e-14);
  CHECK(std::abs(s.variance - 0.3125) < 1e-14);

  // Half the mass leaked: conditional moments are still those of the
  // remaining distribution.
  RVector leaked = RVector::Constant(4, 0.125);
  const DistributionStats c = distribution_stats(leaked, 1.0);
  CHECK(std::abs(c.mass - 0.5) < 1e-14);
  CHECK(std::abs(c.mean - 1.5) < 1e-14);

  CHECK_THROWS(distribution_stats(RVector::Zero(4), 1.0));
}

TEST_CASE("mass conservation when the volatility dies at both walls") {
  // sigma^2 = 0.02 x (15 - x) vanishes at 0 and 15: no boundary flux.
  const ProcessSpec spec({0.0}, {0.0, 0.3, -0.02}, 15.0, 4,
                         GaussianInitial{7.5, 2.0});
  const Trajectory tr = runge_kutta(spec, 4.0, 1e-3);
  CHECK(std::abs(tr.back().p.sum() - 1.0) < 1e-9);
}

TEST_CASE("mean-reverting boundary leak is monotone") {
  const ProcessSpec spec = ProcessSpec::ornstein_uhlenbeck(
      7.0, 0.5, 0.01, 15.0, 4, GaussianInitial{7.5, 2.0});
  const Trajectory tr = runge_kutta(spec, 4.0, 1e-2);
  double prev = tr.front().p.sum();
  for (std::size_t i = 1; i < tr.size(); i += 40) {
    const double mass = tr[i].p.sum();
    CHECK(mass <= prev + 1e-12);
    prev = mass;
  }
}
