#include "vqsde/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace vqsde {

Trajectory runge_kutta(const MatrixProvider& l_provider,
                       const LatticeDistribution& p0, double t_end,
                       double dt) {
  if (dt <= 0.0) {
    throw std::invalid_argument("runge_kutta: dt must be positive");
  }
  if (t_end < p0.t) {
    throw std::invalid_argument("runge_kutta: t_end before start");
  }
  const double span = t_end - p0.t;
  const std::int64_t steps =
      std::max<std::int64_t>(1, std::llround(std::ceil(span / dt - 1e-12)));
  const double h = span / static_cast<double>(steps);

  Trajectory out;
  out.reserve(steps + 1);
  out.push_back(p0);
  RVector p = p0.p;
  for (std::int64_t s = 0; s < steps; ++s) {
    const double t = p0.t + h * static_cast<double>(s);
    const RMatrix l0 = l_provider(t);
    const RMatrix lh = l_provider(t + 0.5 * h);
    const RMatrix l1 = l_provider(t + h);
    const RVector k1 = l0 * p;
    const RVector k2 = lh * (p + 0.5 * h * k1);
    const RVector k3 = lh * (p + 0.5 * h * k2);
    const RVector k4 = l1 * (p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!p.allFinite()) {
      throw std::runtime_error("runge_kutta: non-finite state at step " +
                               std::to_string(s));
    }
    out.push_back({p, p0.t + h * static_cast<double>(s + 1)});
  }
  return out;
}

Trajectory runge_kutta(const ProcessSpec& spec, double t_end, double dt) {
  return runge_kutta([&spec](double t) { return build_L_dense(spec, t); },
                     spec.initial_lattice(), t_end, dt);
}

Moments analytic_moments(const AnalyticProcess& process, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("analytic_moments: t must be >= 0");
  }
  if (const auto* g = std::get_if<GbmParams>(&process)) {
    const double mean = g->x0 * std::exp(g->r * t);
    const double var = g->x0 * g->x0 * std::exp(2.0 * g->r * t) *
                       std::expm1(g->sigma * g->sigma * t);
    return {mean, var};
  }
  const auto& o = std::get<OuParams>(process);
  const double mean = o.r + (o.x0 - o.r) * std::exp(-o.eta * t);
  const double s2 = o.sigma * o.sigma;
  const double var = o.eta == 0.0
                         ? s2 * t
                         : s2 * (-std::expm1(-2.0 * o.eta * t)) /
                               (2.0 * o.eta);
  return {mean, var};
}

McResult euler_maruyama_mc(const ProcessSpec& spec, std::int64_t paths,
                           double dt, double t_end, std::uint64_t seed,
                           const PiecewisePoly* payoff) {
  if (paths < 1) {
    throw std::invalid_argument("euler_maruyama_mc: paths must be >= 1");
  }
  if (dt <= 0.0 || t_end <= 0.0) {
    throw std::invalid_argument("euler_maruyama_mc: need dt > 0, T > 0");
  }
  const std::int64_t steps =
      std::max<std::int64_t>(1, std::llround(std::ceil(t_end / dt - 1e-12)));
  const double h = t_end / static_cast<double>(steps);
  const double sqrt_h = std::sqrt(h);

  const RVector p0 = spec.initial_lattice().p;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::int64_t> start(p0.begin(), p0.end());
  std::normal_distribution<double> normal(0.0, 1.0);

  RVector bins = RVector::Zero(spec.grid_points());
  double payoff_sum = 0.0;
  std::int64_t clipped = 0;
  for (std::int64_t path = 0; path < paths; ++path) {
    double x = spec.grid_x(start(rng));
    bool was_clipped = false;
    for (std::int64_t s = 0; s < steps; ++s) {
      const double t = h * static_cast<double>(s);
      const double sig2 = std::max(0.0, spec.sigma2(x, t));
      x += spec.mu(x, t) * h + std::sqrt(sig2) * sqrt_h * normal(rng);
      if (x < 0.0 || x > spec.x_max()) {
        x = std::clamp(x, 0.0, spec.x_max());
        was_clipped = true;
      }
    }
    const std::int64_t bin = std::clamp<std::int64_t>(
        std::llround(x / spec.dx()), 0, spec.grid_points() - 1);
    bins[bin] += 1.0;
    if (payoff != nullptr) {
      payoff_sum += (*payoff)(x);
    }
    clipped += was_clipped ? 1 : 0;
  }
  const double inv = 1.0 / static_cast<double>(paths);
  return {{bins * inv, t_end}, payoff_sum * inv,
          static_cast<double>(clipped) * inv};
}

DistributionStats distribution_stats(const RVector& p, double dx) {
  const double mass = p.sum();
  if (mass < 1e-12) {
    throw std::runtime_error("distribution_stats: vanishing mass");
  }
  double mean = 0.0;
  for (std::int64_t i = 0; i < p.size(); ++i) {
    mean += dx * static_cast<double>(i) * p[i];
  }
  mean /= mass;
  double var = 0.0;
  for (std::int64_t i = 0; i < p.size(); ++i) {
    const double d = dx * static_cast<double>(i) - mean;
    var += d * d * p[i];
  }
  var /= mass;
  return {mass, mean, var};
}

}  // namespace vqsde
