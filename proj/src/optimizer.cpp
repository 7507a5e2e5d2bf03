#include "qkd/optimizer.hpp"

#include <algorithm>
#include <sstream>

#include "qkd/distillation.hpp"
#include "qkd/parallel.hpp"

namespace qkd {

namespace {

std::string describe_point(double mu, double distance, const std::string& cause) {
  std::ostringstream msg;
  msg << "rate evaluation failed at mu = " << mu << ", distance = " << distance << " km: " << cause;
  return msg.str();
}

void require_increasing(std::span<const double> grid, std::string_view name, double min_value) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= min_value) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      std::ostringstream msg;
      msg << name << " must be strictly increasing and >= " << min_value << " (offending value " << grid[i]
          << " at index " << i << ")";
      throw DomainError(msg.str());
    }
  }
}

// distilled_rate with estimator failures rethrown as PointEvaluationError.
double rate_at(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve) {
  try {
    return distilled_rate(link, proto, eve);
  } catch (const ConvergenceError& err) {
    throw PointEvaluationError(link->mean_photon_number, link->fiber_length, err.what());
  }
}

RateCurve evaluate_curve(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve,
                         std::span<const double> mu_grid, unsigned threads, std::string label) {
  require_increasing(mu_grid, "mu grid", 0.0);
  RateCurve curve;
  curve.axis.assign(mu_grid.begin(), mu_grid.end());
  curve.rates.resize(mu_grid.size());
  curve.label = std::move(label);
  std::vector<std::string> errors(mu_grid.size());

  detail::parallel_for(mu_grid.size(), threads, [&](std::size_t i) {
    try {
      curve.rates[i] = rate_at(link.with_mean_photon_number(mu_grid[i]), proto, eve);
    } catch (const std::exception& err) {
      errors[i] = err.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!curve.rates[i]) curve.failures.push_back({i, errors[i]});
  }
  return curve;
}

}  // namespace

PointEvaluationError::PointEvaluationError(double mu, double distance, const std::string& cause)
    : ConvergenceError(describe_point(mu, distance, cause)), mu_(mu), distance_(distance) {}

std::string_view to_string(OptimumKind kind) {
  switch (kind) {
    case OptimumKind::Interior: return "interior";
    case OptimumKind::Boundary: return "boundary";
    case OptimumKind::Degenerate: return "degenerate";
  }
  return "?";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  if (n > 1) out.back() = hi;
  return out;
}

RateCurve sweep_mu(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve,
                   std::span<const double> mu_grid, unsigned threads) {
  return evaluate_curve(link, proto, eve, mu_grid, threads, std::string(to_string(eve->pns_estimator)));
}

OptimalMuPoint optimal_mu(const LinkParameters& link, const ProtocolParameters& proto,
                          const EavesdropperModel& eve, const OptimizeOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("optimal_mu: tol must be positive");
  if (options.coarse_points < 3) throw DomainError("optimal_mu: at least 3 coarse points are required");
  const numerics::Bracket& bracket = options.bracket;
  if (!(bracket.lo > 0.0)) throw DomainError("optimal_mu: search bracket must exclude mu = 0");

  OptimalMuPoint result;
  result.distance = link->fiber_length;

  // Localize the mode on a coarse grid before the bounded search.
  const std::vector<double> grid = linspace(bracket.lo, bracket.hi, options.coarse_points);
  std::vector<double> coarse(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) coarse[i] = rate_at(link.with_mean_photon_number(grid[i]), proto, eve);

  const auto peak = std::max_element(coarse.begin(), coarse.end());
  if (*peak <= 0.0) return result;

  const std::size_t i = static_cast<std::size_t>(peak - coarse.begin());
  const double lo = grid[i == 0 ? 0 : i - 1];
  const double hi = grid[std::min(i + 1, grid.size() - 1)];
  const auto best = numerics::minimize_scalar(
      [&](double mu) { return -rate_at(link.with_mean_photon_number(mu), proto, eve); }, numerics::Bracket(lo, hi),
      options.tol);

  result.mu_opt = best.x;
  result.rate_opt = -best.f;
  if (*peak > result.rate_opt) {
    result.mu_opt = grid[i];
    result.rate_opt = *peak;
  }
  result.kind = (*result.mu_opt == bracket.lo || *result.mu_opt == bracket.hi) ? OptimumKind::Boundary
                                                                                 : OptimumKind::Interior;
  return result;
}

std::vector<OptimalMuPoint> optimal_mu_vs_distance(const LinkParameters& link, const ProtocolParameters& proto,
                                                   const EavesdropperModel& eve,
                                                   std::span<const double> distance_grid,
                                                   const OptimizeOptions& options, unsigned threads) {
  require_increasing(distance_grid, "distance grid", 0.0);
  std::vector<OptimalMuPoint> points(distance_grid.size());
  std::vector<std::string> errors(distance_grid.size());
  std::vector<char> failed(distance_grid.size(), 0);

  detail::parallel_for(distance_grid.size(), threads, [&](std::size_t i) {
    try {
      points[i] = optimal_mu(link.with_fiber_length(distance_grid[i]), proto, eve, options);
    } catch (const std::exception& err) {
      failed[i] = 1;
      errors[i] = err.what();
    }
  });
  for (std::size_t i = 0; i < failed.size(); ++i) {
    if (failed[i]) throw ConvergenceError(errors[i]);
  }
  return points;
}

RateSurface sweep_surface(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve,
                          std::span<const double> distance_grid, std::span<const double> mu_grid,
                          unsigned threads) {
  require_increasing(distance_grid, "distance grid", 0.0);
  require_increasing(mu_grid, "mu grid", 0.0);

  RateSurface surface;
  surface.distances.assign(distance_grid.begin(), distance_grid.end());
  surface.mus.assign(mu_grid.begin(), mu_grid.end());
  const std::size_t cols = mu_grid.size();
  surface.rates.resize(distance_grid.size() * cols);
  std::vector<std::string> errors(surface.rates.size());

  detail::parallel_for(surface.rates.size(), threads, [&](std::size_t idx) {
    try {
      const LinkParameters at = link.with_fiber_length(distance_grid[idx / cols]);
      surface.rates[idx] = rate_at(at.with_mean_photon_number(mu_grid[idx % cols]), proto, eve);
    } catch (const std::exception& err) {
      errors[idx] = err.what();
    }
  });
  for (std::size_t idx = 0; idx < errors.size(); ++idx) {
    if (!surface.rates[idx]) surface.failures.push_back({idx, errors[idx]});
  }
  return surface;
}

std::vector<RateCurve> compare_estimates(const LinkParameters& link, const ProtocolParameters& proto,
                                         const EavesdropperModel& eve, std::span<const double> mu_grid,
                                         unsigned threads) {
  std::vector<RateCurve> curves;
  for (PnsEstimator estimator :
       {PnsEstimator::OriginalBennett, PnsEstimator::RevisedBennett, PnsEstimator::GilbertHamrick}) {
    curves.push_back(sweep_mu(link, proto, eve.with_estimator(estimator), mu_grid, threads));
  }
  return curves;
}

}  // namespace qkd
