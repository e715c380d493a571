#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "vqsde/generator.h"

using namespace vqsde;

namespace {

ProcessSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(2, 5);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  const int n = n_dist(rng);
  std::vector<double> mu(deg(rng) + 1);
  for (double& c : mu) {
    c = coef(rng);
  }
  // Square a random polynomial so sigma^2 >= 0 everywhere; cap the degree
  // at 3 to stay within the acceptance envelope.
  std::vector<double> root(2);
  for (double& c : root) {
    c = coef(rng);
  }
  std::vector<double> s2(3, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s2[i + j] += root[i] * root[j];
    }
  }
  const double x_max = static_cast<double>((1 << n) - 1);
  return ProcessSpec(mu, s2, x_max, n, DeltaInitial{0.0});
}

}  // namespace

TEST_CASE("transition probabilities") {
  const ProcessSpec frozen({0.0}, {0.0}, 1.0, 2, DeltaInitial{0.0});
  const TransitionProbs f = transition_probs(frozen, 1, 0.0, 0.01);
  CHECK(f.p_u == 0.0);
  CHECK(f.p_d == 0.0);
  CHECK(f.p_m == 1.0);
  CHECK_FALSE(f.negative);

  const ProcessSpec gbm = ProcessSpec::gbm(0.1, 0.2, 15.0, 4,
                                           DeltaInitial{7.0});
  const TransitionProbs at10 = transition_probs(gbm, 10, 0.0, 0.01);
  CHECK(std::abs(at10.p_u - 0.025) < 1e-15);
  CHECK(std::abs(at10.p_d - 0.015) < 1e-15);
  CHECK(std::abs(at10.p_m - 0.96) < 1e-15);
  CHECK_FALSE(at10.negative);
  CHECK(at10.p_u + at10.p_d + at10.p_m == 1.0);

  const TransitionProbs at2 = transition_probs(gbm, 2, 0.0, 0.01);
  CHECK(std::abs(at2.p_d + 2e-4) < 1e-15);
  CHECK(at2.negative);

  CHECK_THROWS(transition_probs(gbm, 16, 0.0, 0.01));
  CHECK_THROWS(transition_probs(gbm, 0, 0.0, -1.0));
}

TEST_CASE("process spec validation and factories") {
  CHECK_THROWS(ProcessSpec({0.0}, {-1.0}, 1.0, 2, DeltaInitial{0.0}));
  CHECK_THROWS(ProcessSpec({}, {0.0}, 1.0, 2, DeltaInitial{0.0}));
  CHECK_THROWS(ProcessSpec({0.0}, {0.0}, -1.0, 2, DeltaInitial{0.0}));

  const ProcessSpec gbm = ProcessSpec::gbm(0.1, 0.2, 15.0, 4,
                                           DeltaInitial{7.0});
  CHECK(gbm.mu(10.0, 0.0) == doctest::Approx(1.0));
  CHECK(gbm.sigma2(10.0, 0.0) == doctest::Approx(4.0));
  CHECK(gbm.dx() == doctest::Approx(1.0));

  const ProcessSpec ou = ProcessSpec::ornstein_uhlenbeck(
      7.0, 0.5, 0.01, 15.0, 4, DeltaInitial{7.0});
  CHECK(ou.mu(7.0, 0.0) == doctest::Approx(0.0));
  CHECK(ou.mu(0.0, 0.0) == doctest::Approx(0.07));
  CHECK(ou.sigma2(3.0, 0.0) == doctest::Approx(0.25));
}

TEST_CASE("initial distributions project onto the grid") {
  const ProcessSpec spec({0.0}, {0.0}, 15.0, 4, DeltaInitial{7.4});
  const RVector delta = spec.initial_lattice().p;
  CHECK(delta[7] == 1.0);
  CHECK(delta.sum() == 1.0);

  const ProcessSpec gspec({0.0}, {0.0}, 15.0, 4, GaussianInitial{7.5, 2.0});
  const RVector gauss = gspec.initial_lattice().p;
  CHECK(std::abs(gauss.sum() - 1.0) < 1e-12);
  CHECK(gauss.minCoeff() >= 0.0);
  CHECK(gauss[7] == gauss[8]);  // symmetric about 7.5

  CHECK_THROWS(ProcessSpec({0.0}, {0.0}, 15.0, 4,
                           ExplicitInitial{{0.5, 0.5}})
                   .initial_lattice());
}

TEST_CASE("time-dependent coefficient schedules") {
  ProcessSpec spec({0.0}, {1.0}, 3.0, 2, DeltaInitial{0.0});
  spec.set_schedule({{1.0, {5.0}}, {2.0, {7.0}}}, {});
  CHECK(spec.mu(0.0, 0.5) == 0.0);
  CHECK(spec.mu(0.0, 1.5) == 5.0);
  CHECK(spec.mu(0.0, 2.5) == 7.0);
  CHECK(spec.sigma2(0.0, 2.5) == 1.0);
}

TEST_CASE("dense generator structure") {
  const ProcessSpec frozen({0.0}, {0.0}, 3.0, 2, DeltaInitial{0.0});
  CHECK(build_L_dense(frozen, 0.0).cwiseAbs().maxCoeff() == 0.0);

  const ProcessSpec diffusion({0.0}, {2.0}, 3.0, 2, DeltaInitial{0.0});
  const RMatrix l = build_L_dense(diffusion, 0.0);
  for (int k = 0; k < 4; ++k) {
    CHECK(l(k, k) == -2.0);
    if (k > 0) {
      CHECK(l(k - 1, k) == 1.0);
    }
    if (k < 3) {
      CHECK(l(k + 1, k) == 1.0);
    }
  }

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ProcessSpec spec = random_spec(rng);
    const RMatrix lr = build_L_dense(spec, 0.0);
    for (std::int64_t k = 1; k + 1 < spec.grid_points(); ++k) {
      // Exact conservation off-boundary: the diagonal is built as the
      // negative of (up + down), so this order cancels in floating point.
      CHECK((lr(k + 1, k) + lr(k - 1, k)) + lr(k, k) == 0.0);
    }
  }
}

TEST_CASE("cyclic shifts") {
  const CMatrix inc = circuit_to_dense(cyc_inc(2));
  CHECK(std::abs(inc(0, 3) - 1.0) < 1e-15);  // |3> -> |0>
  CHECK(std::abs(inc(2, 1) - 1.0) < 1e-15);  // |1> -> |2>
  for (int n = 1; n <= 5; ++n) {
    Circuit round(n);
    round.append(cyc_inc(n));
    round.append(cyc_dec(n));
    const CMatrix u = circuit_to_dense(round);
    CHECK((u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("truncated shift operators") {
  const StateVector up0 =
      apply_unitary_sum(StateVector::basis_state(2, 0), v_plus(2));
  CHECK(std::abs(up0.amplitudes()[1] - 1.0) < 1e-12);
  const StateVector top =
      apply_unitary_sum(StateVector::basis_state(2, 3), v_plus(2));
  CHECK(top.amplitudes().cwiseAbs().maxCoeff() < 1e-12);

  const CMatrix vp = unitary_sum_to_dense(v_plus(3));
  const CMatrix vm = unitary_sum_to_dense(v_minus(3));
  CHECK((vm - vp.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double expect = (i == j + 1 && j <= 6) ? 1.0 : 0.0;
      CHECK(std::abs(vp(i, j) - expect) < 1e-12);
    }
  }
}

TEST_CASE("diagonal index operator powers") {
  const UnitarySum d0 = d_operator(2, 0);
  CHECK(d0.term_count() == 1);
  CHECK(d0.terms()[0].coefficient == Complex(1.0, 0.0));
  CHECK(d0.terms()[0].circuit.gates().empty());

  const auto terms = d_power_terms(2, 1);
  CHECK(terms.at(0) == 1.5);   // identity part (2^n - 1)/2
  CHECK(terms.at(1) == -1.0);  // Z on qubit 0 carries weight 2^{n-2}
  CHECK(terms.at(2) == -0.5);

  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const CMatrix d = unitary_sum_to_dense(d_operator(n, m));
      for (std::int64_t i = 0; i < (1 << n); ++i) {
        CHECK(std::abs(d(i, i) - std::pow(double(i), m)) < 1e-9);
        for (std::int64_t j = 0; j < (1 << n); ++j) {
          if (i != j) {
            CHECK(std::abs(d(i, j)) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("unitary-sum generator matches the dense generator") {
  const ProcessSpec frozen({0.0}, {0.0}, 3.0, 2, DeltaInitial{0.0});
  CHECK(build_L_unitary_sum(frozen, 0.0).term_count() == 0);

  const ProcessSpec diffusion({0.0}, {2.0}, 7.0, 3, DeltaInitial{0.0});
  const CMatrix ud = unitary_sum_to_dense(build_L_unitary_sum(diffusion, 0.0));
  CHECK((ud.real() - build_L_dense(diffusion, 0.0)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(ud.imag().cwiseAbs().maxCoeff() < 1e-12);

  const ProcessSpec gbm = ProcessSpec::gbm(0.1, 0.2, 15.0, 4,
                                           DeltaInitial{7.0});
  const CMatrix ug = unitary_sum_to_dense(build_L_unitary_sum(gbm, 0.0));
  CHECK((ug.real() - build_L_dense(gbm, 0.0)).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ProcessSpec spec = random_spec(rng);
    const CMatrix u = unitary_sum_to_dense(build_L_unitary_sum(spec, 0.0));
    CHECK((u.real() - build_L_dense(spec, 0.0)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("gate count report prices multi-controlled gates quadratically") {
  const GateCountReport report =
      decomposition_gate_report(build_L_unitary_sum(
          ProcessSpec({0.0}, {2.0}, 7.0, 3, DeltaInitial{0.0}), 0.0));
  CHECK(report.terms > 0);
  CHECK(report.compiled_gates > report.terms);

  UnitarySum single(4);
  Circuit c(4);
  c.append(Gate::cnz(4));  // 3 controls -> 9 compiled gates
  single.append(1.0, c);
  CHECK(decomposition_gate_report(single).compiled_gates == 9);
}
