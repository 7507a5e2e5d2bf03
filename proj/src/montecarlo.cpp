#include "qkd/montecarlo.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "qkd/errors.hpp"
#include "qkd/link_model.hpp"
#include "qkd/parallel.hpp"

namespace qkd {

namespace {

struct Counts {
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
};

// Per-photon routing probabilities, given the photon survived the channel.
struct Routing {
  double correct;      // matched basis, detector agreeing with Alice's bit
  double wrong;        // matched basis, the other detector
  double either;       // mismatched basis, each detector
};

Routing photon_routing(const LinkSpec& s) {
  const double eta = (s.det_eff0 + s.det_eff1) / 2.0;
  const double norm = 1.0 + s.det_leak0 + s.det_leak1;
  const double e = (s.det_eff0 * s.det_leak0 + s.det_eff1 * s.det_leak1) / (s.det_eff0 + s.det_eff1);
  const double cos_half = std::cos(s.resid_phase / 2.0);
  const double sin_half = std::sin(s.resid_phase / 2.0);
  return {eta * (e + cos_half * cos_half) / norm, eta * (e + sin_half * sin_half) / norm, eta * (e + 0.5) / norm};
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

Counts simulate_chunk(const LinkSpec& s, double atten, const Routing& route, std::uint64_t pulses,
                      std::mt19937_64& rng) {
  std::poisson_distribution<int> photons(s.mean_photon_number > 0.0 ? s.mean_photon_number : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool has_photons = s.mean_photon_number > 0.0;
  const std::array<double, 2> p_dark{s.p_dark0, s.p_dark1};
  const std::array<double, 2> p_after{s.p_after0, s.p_after1};

  Counts counts;
  std::array<bool, 2> clicked_last{false, false};
  for (std::uint64_t pulse = 0; pulse < pulses; ++pulse) {
    const std::uint64_t bits = rng();
    const int alice_bit = static_cast<int>(bits & 1u);
    const bool matched = ((bits >> 1) & 1u) == ((bits >> 2) & 1u);

    std::array<bool, 2> click{false, false};
    const int n = has_photons ? photons(rng) : 0;
    for (int photon = 0; photon < n; ++photon) {
      if (unit(rng) >= atten) continue;
      const double u = unit(rng);
      if (matched) {
        if (u < route.correct) {
          click[alice_bit] = true;
        } else if (u < route.correct + route.wrong) {
          click[1 - alice_bit] = true;
        }
      } else {
        if (u < route.either) {
          click[0] = true;
        } else if (u < 2.0 * route.either) {
          click[1] = true;
        }
      }
    }
    for (int d = 0; d < 2; ++d) {
      if (unit(rng) < p_dark[d]) click[d] = true;
      if (clicked_last[d] && unit(rng) < p_after[d]) click[d] = true;
    }
    clicked_last = click;

    if (!matched || !(click[0] || click[1])) continue;
    ++counts.sifted;
    int bob_bit;
    if (click[0] && click[1]) {
      bob_bit = static_cast<int>((bits >> 3) & 1u);  // double click: random bit
    } else {
      bob_bit = click[1] ? 1 : 0;
    }
    if (bob_bit != alice_bit) ++counts.errors;
  }
  return counts;
}

}  // namespace

SimulationResult simulate_link(const LinkParameters& link, std::uint64_t n_pulses, std::uint64_t seed,
                               const SimulationOptions& options) {
  if (n_pulses == 0) throw DomainError("simulate_link: n_pulses must be at least 1");
  if (options.chunk_size == 0) throw DomainError("simulate_link: chunk_size must be at least 1");

  const LinkSpec& s = *link;
  const Routing route = photon_routing(s);
  if (route.correct + route.wrong > 1.0 || 2.0 * route.either > 1.0) {
    std::ostringstream msg;
    msg << "simulate_link: efficiency and leak imply a per-photon detection probability above 1 ("
        << route.correct + route.wrong << ")";
    throw DomainError(msg.str());
  }
  const double atten = channel_attenuation(link);

  const std::uint64_t n_chunks = (n_pulses + options.chunk_size - 1) / options.chunk_size;
  std::vector<Counts> per_chunk(n_chunks);
  detail::parallel_for(n_chunks, options.threads, [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * options.chunk_size;
    const std::uint64_t pulses = std::min(options.chunk_size, n_pulses - begin);
    std::mt19937_64 rng = chunk_engine(seed, chunk);
    per_chunk[chunk] = simulate_chunk(s, atten, route, pulses, rng);
  });

  SimulationResult result;
  result.n_pulses = n_pulses;
  result.seed = seed;
  for (const Counts& c : per_chunk) {
    result.sifted_count += c.sifted;
    result.error_count += c.errors;
  }
  result.estimated_rate = static_cast<double>(result.sifted_count) * source_rate(link) / static_cast<double>(n_pulses);
  result.estimated_qber = result.sifted_count == 0 ? 0.0
                                                   : static_cast<double>(result.error_count) /
                                                         static_cast<double>(result.sifted_count);
  return result;
}

AnalyticComparison compare_with_analytic(const SimulationResult& sim, const LinkParameters& link) {
  const DetectionProbabilities d = detection_probabilities(link);
  const SiftedResult analytic = sifted_rate(link);
  const double n = static_cast<double>(sim.n_pulses);

  AnalyticComparison out;
  out.analytic_rate = analytic.rate;
  out.analytic_qber = analytic.qber;
  out.sifted_fraction = d.p_valid / 2.0;

  const double p = out.sifted_fraction;
  out.rate_sigma = std::sqrt(p * (1.0 - p) / n) * source_rate(link);
  if (out.rate_sigma > 0.0) out.rate_z = (sim.estimated_rate - analytic.rate) / out.rate_sigma;

  if (sim.sifted_count > 0) {
    const double q = analytic.qber;
    out.qber_sigma = std::sqrt(q * (1.0 - q) / static_cast<double>(sim.sifted_count));
    if (out.qber_sigma > 0.0) out.qber_z = (sim.estimated_qber - q) / out.qber_sigma;
  }

  const double p_hat = static_cast<double>(sim.sifted_count) / n;
  const double half_width = 1.959963984540054 * std::sqrt(p_hat * (1.0 - p_hat) / n);
  out.sifted_fraction_in_95 = std::abs(p - p_hat) <= half_width;
  return out;
}

}  // namespace qkd
