#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "vqsde/expectation.h"
#include "vqsde/generator.h"

namespace vqsde {

/// Ordered samples of the master-equation solution, strictly increasing t.
using Trajectory = std::vector<LatticeDistribution>;

using MatrixProvider = std::function<RMatrix(double)>;

/// Classic fourth-order Runge-Kutta on dP/dt = L(t) P from p0.t to t_end.
/// The step count is chosen so the grid lands on t_end exactly. Throws with
/// the step index if the state goes non-finite.
Trajectory runge_kutta(const MatrixProvider& l_provider,
                       const LatticeDistribution& p0, double t_end,
                       double dt = 1e-3);

/// Same, with L(t) built from the process at every stage evaluation.
Trajectory runge_kutta(const ProcessSpec& spec, double t_end,
                       double dt = 1e-3);

struct GbmParams {
  double r;
  double sigma;
  double x0;
};

struct OuParams {
  double r;
  double sigma;
  double eta;
  double x0;
};

using AnalyticProcess = std::variant<GbmParams, OuParams>;

struct Moments {
  double mean;
  double variance;
};

/// Closed-form mean and variance of the continuum process at time t. The
/// mean-reverting case degrades gracefully: eta = 0 gives variance
/// sigma^2 t.
Moments analytic_moments(const AnalyticProcess& process, double t);

struct McResult {
  LatticeDistribution distribution;
  double payoff_expectation;
  /// Fraction of paths clipped to [0, x_max] at least once. Clipping is
  /// absorbing, matching the truncated generator's boundary bias.
  double clipped_mass;
};

/// Euler-Maruyama Monte Carlo on the continuum SDE: paths start from the
/// spec's initial distribution, terminal values are binned to the nearest
/// grid point. The payoff, if given, is averaged over terminal values.
McResult euler_maruyama_mc(const ProcessSpec& spec, std::int64_t paths,
                           double dt, double t_end, std::uint64_t seed,
                           const PiecewisePoly* payoff = nullptr);

struct DistributionStats {
  double mass;
  double mean;
  double variance;
};

/// mass = sum p; mean and variance of x are normalized by the mass, so a
/// leaked distribution still reports its conditional moments.
DistributionStats distribution_stats(const RVector& p, double dx);

}  // namespace vqsde
