#pragma once

// Pulse-by-pulse stochastic simulation of the link, used to cross-check the
// analytic sifted rate and QBER.
//
// Stream derivation: the pulse sequence is cut into fixed-size chunks; chunk
// i draws from std::mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, i_lo,
// i_hi} (32-bit halves). Totals are summed in chunk order, so results depend on
// the seed and chunk size only, never on the number of threads. Afterpulse
// memory starts empty at each chunk boundary.

#include <cstdint>

#include "qkd/core.hpp"

namespace qkd {

struct SimulationResult {
  std::uint64_t n_pulses = 0;
  std::uint64_t sifted_count = 0;
  std::uint64_t error_count = 0;
  double estimated_rate = 0.0;  // bits/s
  double estimated_qber = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SimulationResult&) const = default;
};

struct SimulationOptions {
  std::uint64_t chunk_size = std::uint64_t{1} << 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Throws DomainError when n_pulses == 0, chunk_size == 0, or when the
/// averaged efficiency and leak describe more than one detection per photon.
SimulationResult simulate_link(const LinkParameters& link, std::uint64_t n_pulses, std::uint64_t seed,
                               const SimulationOptions& options = {});

/// Simulation vs. analytic model, in units of the binomial standard error.
struct AnalyticComparison {
  double analytic_rate = 0.0;
  double analytic_qber = 0.0;
  double sifted_fraction = 0.0;       // analytic p_valid / 2, per pulse
  double rate_sigma = 0.0;            // bits/s
  double qber_sigma = 0.0;
  double rate_z = 0.0;                // (estimated - analytic) / sigma
  double qber_z = 0.0;
  bool sifted_fraction_in_95 = false; // analytic fraction within the empirical 95% interval
};

AnalyticComparison compare_with_analytic(const SimulationResult& sim, const LinkParameters& link);

}  // namespace qkd
