// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "exact_binomial.hpp"
#include "golden_values.hpp"
#include "qkd/config.hpp"
#include "qkd/distillation.hpp"
#include "qkd/link_model.hpp"
#include "qkd/montecarlo.hpp"
#include "qkd/numerics.hpp"
#include "qkd/optimizer.hpp"

using namespace qkd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void optimal_mu_at_defaults() {
  const Scenario s = presets::mark2_jan2004();
  const auto t0 = Clock::now();
  const OptimalMuPoint p = optimal_mu(s.link, s.proto, s.eve);
  const double dt = seconds_since(t0);
  const bool ok = p.mu_opt && std::abs(*p.mu_opt - 1.15) <= 0.05 && dt < 1.0;
  report(1, ok, fmt("mu_opt = %.6f (target 1.15 +/- 0.05), rate %.2f bit/s, %.3f s", p.mu_opt.value_or(-1.0),
                    p.rate_opt, dt));
}

void rate_ratio() {
  const Scenario s = presets::mark2_jan2004();
  const double hi = distilled_rate(s.link.with_mean_photon_number(1.1), s.proto, s.eve);
  const double lo = distilled_rate(s.link.with_mean_photon_number(0.1), s.proto, s.eve);
  const double ratio = hi / lo;
  report(2, ratio >= 8.0 && ratio <= 12.0,
         fmt("rate(1.1) / rate(0.1) = %.2f / %.2f = %.3f (target [8, 12])", hi, lo, ratio));
}

void optimal_mu_over_distance() {
  const Scenario s = presets::mark2_jan2004();
  const std::vector<double> km = linspace(0.0, 50.0, 51);
  const auto t0 = Clock::now();
  const auto points = optimal_mu_vs_distance(s.link, s.proto, s.eve, km);
  const double dt = seconds_since(t0);

  double lo = 1e300, hi = -1e300;
  bool all_defined = true;
  for (const OptimalMuPoint& p : points) {
    if (!p.mu_opt) {
      all_defined = false;
      continue;
    }
    lo = std::min(lo, *p.mu_opt);
    hi = std::max(hi, *p.mu_opt);
  }
  const double spread = (hi - lo) / lo;
  const bool ok = all_defined && lo >= 0.95 && hi <= 1.25 && spread <= 0.25 && dt < 30.0;
  report(3, ok, fmt("mu_opt over 0-50 km in [%.4f, %.4f], spread %.3f (target [0.95, 1.25], <= 0.25), %.2f s", lo,
                    hi, spread, dt));
}

void compare_estimates_claims() {
  const Scenario s = presets::mark2_jan2004();
  const SweepSettings sweep;
  const std::vector<double> grid = linspace(sweep.mu_min, sweep.mu_max, sweep.mu_steps);
  const auto curves = compare_estimates(s.link, s.proto, s.eve, grid);

  int original_nonzero = 0, original_above = 0, gh_not_below = 0, failed = 0, positive = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!curves[0].rates[i] || !curves[1].rates[i] || !curves[2].rates[i]) {
      ++failed;
      continue;
    }
    const double original = *curves[0].rates[i];
    const double revised = *curves[1].rates[i];
    const double gh = *curves[2].rates[i];
    if (grid[i] >= 1.0 && original != 0.0) ++original_nonzero;
    if (original > revised) ++original_above;
    // both curves are clipped at 0 where no key survives; elsewhere strict
    if (revised > 0.0) {
      ++positive;
      if (!(gh < revised)) ++gh_not_below;
    } else if (gh > revised) {
      ++gh_not_below;
    }
  }
  const bool ok = failed == 0 && original_nonzero == 0 && original_above == 0 && gh_not_below == 0;
  report(4, ok,
         fmt("%zu mu points: original nonzero at mu >= 1: %d, original > revised: %d, GH not below revised: %d "
             "(strict at %d points with revised > 0), failed points: %d",
             grid.size(), original_nonzero, original_above, gh_not_below, positive, failed));
}

void montecarlo_equivalence() {
  const Scenario s = presets::mark2_jan2004();
  const auto t0 = Clock::now();
  int beyond_4sigma = 0, in_95 = 0;
  double worst_z = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SimulationResult sim = simulate_link(s.link, 10'000'000, seed);
    const AnalyticComparison cmp = compare_with_analytic(sim, s.link);
    worst_z = std::max({worst_z, std::abs(cmp.rate_z), std::abs(cmp.qber_z)});
    if (std::abs(cmp.rate_z) > 4.0 || std::abs(cmp.qber_z) > 4.0) ++beyond_4sigma;
    if (cmp.sifted_fraction_in_95) ++in_95;
  }
  const double dt = seconds_since(t0);
  const bool ok = beyond_4sigma == 0 && in_95 >= 18 && dt < 60.0;
  report(5, ok, fmt("20 seeds x 1e7 pulses: runs beyond 4 sigma: %d (worst |z| %.2f), in 95%% interval: %d/20, "
                    "%.1f s total",
                    beyond_4sigma, worst_z, in_95, dt));
}

void numerics_suite() {
  double worst_roundtrip = 0.0;
  for (int i = -20000; i <= 20000; ++i) {
    const double x = (1.0 - 1e-9) * i / 20000.0;
    worst_roundtrip = std::max(worst_roundtrip, std::abs(std::erf(numerics::erf_inv(x)) - x));
  }
  for (double gap = 1e-9; gap < 0.5; gap *= 1.3) {
    for (double x : {1.0 - gap, gap - 1.0}) {
      worst_roundtrip = std::max(worst_roundtrip, std::abs(std::erf(numerics::erf_inv(x)) - x));
    }
  }

  double worst_tail = 0.0;
  long tails = 0;
  for (unsigned n = 1; n <= 1000; ++n) {
    for (double p : {0.01, 0.1, 1.0 / 3.0}) {
      const auto cdf = oracle::binomial_cdf(n, p);
      for (unsigned k = 0; k <= n; ++k) {
        const double exact = static_cast<double>(cdf[k]);
        const double got = numerics::binom_tail_deficit(n, k, p, 0.0);
        worst_tail = std::max(worst_tail, rel_err(got, exact));
        ++tails;
      }
    }
  }

  double worst_beta = 0.0;
  for (double a : {0.75, 1.0, 2.0, 7.5, 41.0, 300.0, 4096.0, 1e6}) {
    worst_beta = std::max(worst_beta, std::abs(numerics::inv_beta_approx(a, a, 0.5) - 0.5));
  }

  const bool ok = worst_roundtrip <= 1e-10 && worst_tail <= 1e-6 && worst_beta <= 1e-12;
  report(6, ok, fmt("erf_inv roundtrip max %.2e (<= 1e-10); %ld binomial tails, max rel err %.2e (<= 1e-6); "
                    "inv_beta(a,a,0.5) max dev %.2e (<= 1e-12)",
                    worst_roundtrip, tails, worst_tail, worst_beta));
}

void entropy_properties() {
  const double b = 4096.0, c = 1e-6;
  int violations = 0;
  double prev[3] = {1e300, 1e300, 1e300};
  for (int i = 0; i <= 400; ++i) {
    const double e = b * 0.2 * i / 400.0;
    const double h[3] = {entropy_bennett(b, e, c), entropy_slutsky(b, e, c), entropy_myers(b, e, c)};
    for (int j = 0; j < 3; ++j) {
      if (h[j] > prev[j]) ++violations;
      prev[j] = h[j];
    }
  }
  const bool bennett_exact = entropy_bennett(b, 0.0, c) == b + 2.0 * std::log2(c);

  double worst_root = 0.0;
  // n >= 64 keeps 1 - c^(1/n) under the 1/3 clamp for these c
  for (double n : {64.0, 512.0, 4096.0, 100000.0}) {
    for (double conf : {1e-3, 1e-6, 1e-9}) {
      const double expect = -std::expm1(std::log(conf) / n);
      worst_root = std::max(worst_root, rel_err(solve_myers(n, 0.0, conf).p_error, expect));
    }
  }
  const bool ok = violations == 0 && bennett_exact && worst_root <= 1e-9;
  report(7, ok, fmt("monotonicity violations over e/b in [0, 0.2]: %d; Bennett(e=0) == b + 2 log2 c: %s; "
                    "Myers k=0 root max rel err %.2e (<= 1e-9)",
                    violations, bennett_exact ? "yes" : "no", worst_root));
}

void golden_sifted() {
  const SiftedResult r = sifted_rate(presets::mark2_jan2004().link);
  const double e_rate = rel_err(r.rate, golden::kSiftedRateDefaults);
  const double e_qber = rel_err(r.qber, golden::kQberDefaults);
  report(8, e_rate <= 1e-9 && e_qber <= 1e-9,
         fmt("sifted rate %.6f bit/s (rel err %.1e), qber %.8f (rel err %.1e), tolerance 1e-9", r.rate, e_rate,
             r.qber, e_qber));
}

}  // namespace

int main() {
  const auto steps = {optimal_mu_at_defaults, rate_ratio,      optimal_mu_over_distance, compare_estimates_claims,
                      montecarlo_equivalence, numerics_suite, entropy_properties,       golden_sifted};
  int id = 1;
  for (auto step : steps) {
    try {
      step();
    } catch (const std::exception& err) {
      report(id, false, std::string("exception: ") + err.what());
    }
    ++id;
  }
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
