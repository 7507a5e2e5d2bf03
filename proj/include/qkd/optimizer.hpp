#pragma once

// Sweeps of the distilled key rate over mean photon number and fiber length,
// and the search for the rate-maximizing mean photon number.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkd/core.hpp"
#include "qkd/errors.hpp"
#include "qkd/numerics.hpp"

namespace qkd {

/// Estimator failure at a specific operating point.
class PointEvaluationError : public ConvergenceError {
 public:
  PointEvaluationError(double mu, double distance, const std::string& cause);
  double mu() const noexcept { return mu_; }
  double distance() const noexcept { return distance_; }

 private:
  double mu_;
  double distance_;
};

struct PointFailure {
  std::size_t index;  // into the flattened output
  std::string message;
};

struct RateCurve {
  std::vector<double> axis;                  // mu or km, strictly increasing
  std::vector<std::optional<double>> rates;  // bits/s; empty where evaluation failed
  std::string label;
  std::vector<PointFailure> failures;
};

struct RateSurface {
  std::vector<double> distances;
  std::vector<double> mus;
  std::vector<std::optional<double>> rates;  // row-major, one row per distance
  std::vector<PointFailure> failures;

  const std::optional<double>& at(std::size_t distance_index, std::size_t mu_index) const {
    return rates.at(distance_index * mus.size() + mu_index);
  }
};

enum class OptimumKind {
  Interior,    // maximizer strictly inside the search bracket
  Boundary,    // rate still rising at a bracket end
  Degenerate,  // rate is zero over the whole bracket
};

std::string_view to_string(OptimumKind kind);

struct OptimalMuPoint {
  double distance = 0.0;
  std::optional<double> mu_opt;  // unset when kind == Degenerate
  double rate_opt = 0.0;
  OptimumKind kind = OptimumKind::Degenerate;
};

struct OptimizeOptions {
  numerics::Bracket bracket{0.01, 5.0};
  double tol = 1e-4;
  std::size_t coarse_points = 32;
};

/// n evenly spaced values from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// threads = 0 uses the hardware concurrency. Results never depend on it.
RateCurve sweep_mu(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve,
                   std::span<const double> mu_grid, unsigned threads = 0);

/// Throws PointEvaluationError if any estimator evaluation fails.
OptimalMuPoint optimal_mu(const LinkParameters& link, const ProtocolParameters& proto,
                          const EavesdropperModel& eve, const OptimizeOptions& options = {});

std::vector<OptimalMuPoint> optimal_mu_vs_distance(const LinkParameters& link, const ProtocolParameters& proto,
                                                   const EavesdropperModel& eve,
                                                   std::span<const double> distance_grid,
                                                   const OptimizeOptions& options = {}, unsigned threads = 0);

RateSurface sweep_surface(const LinkParameters& link, const ProtocolParameters& proto, const EavesdropperModel& eve,
                          std::span<const double> distance_grid, std::span<const double> mu_grid,
                          unsigned threads = 0);

/// One curve per PNS estimator (original Bennett, revised Bennett,
/// Gilbert-Hamrick), all other eavesdropper settings taken from `eve`.
std::vector<RateCurve> compare_estimates(const LinkParameters& link, const ProtocolParameters& proto,
                                         const EavesdropperModel& eve, std::span<const double> mu_grid,
                                         unsigned threads = 0);

}  // namespace qkd
