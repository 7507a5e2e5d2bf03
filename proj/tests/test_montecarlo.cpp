#include <doctest.h>

#include <cmath>

#include "qkd/errors.hpp"
#include "qkd/link_model.hpp"
#include "qkd/montecarlo.hpp"

using namespace qkd;

namespace {

LinkParameters bright() { return presets::mark2_jan2004().link.with_mean_photon_number(1.0); }

SimulationOptions small_chunks(unsigned threads) {
  SimulationOptions o;
  o.chunk_size = 1 << 14;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("same seed, same counts") {
  const auto a = simulate_link(bright(), 200'000, 7, small_chunks(1));
  const auto b = simulate_link(bright(), 200'000, 7, small_chunks(1));
  CHECK(a == b);
  CHECK(a.seed == 7);
  CHECK(a.n_pulses == 200'000);
  const auto c = simulate_link(bright(), 200'000, 8, small_chunks(1));
  CHECK(c.sifted_count != a.sifted_count);
}

TEST_CASE("thread count does not change the counts") {
  const auto one = simulate_link(bright(), 300'001, 42, small_chunks(1));
  const auto three = simulate_link(bright(), 300'001, 42, small_chunks(3));
  const auto eight = simulate_link(bright(), 300'001, 42, small_chunks(8));
  CHECK(one == three);
  CHECK(one == eight);
}

TEST_CASE("a prefix of whole chunks is reproduced exactly") {
  // chunk i draws from its own stream, so the first chunk of a long run
  // equals a run that is exactly one chunk long
  const SimulationOptions o = small_chunks(2);
  const auto first = simulate_link(bright(), o.chunk_size, 3, o);
  const auto whole = simulate_link(bright(), o.chunk_size, 3, SimulationOptions{o.chunk_size, 1});
  CHECK(first == whole);
}

TEST_CASE("estimates follow from the counts") {
  const LinkParameters link = bright();
  const auto r = simulate_link(link, 100'000, 1, small_chunks(0));
  CHECK(r.estimated_rate == doctest::Approx(r.sifted_count * source_rate(link) / 100'000.0));
  CHECK(r.estimated_qber == doctest::Approx(double(r.error_count) / double(r.sifted_count)));
  CHECK(r.error_count <= r.sifted_count);
}

TEST_CASE("simulation agrees with the analytic model") {
  const LinkParameters link = bright();
  const auto r = simulate_link(link, 2'000'000, 11, small_chunks(0));
  const AnalyticComparison cmp = compare_with_analytic(r, link);
  CHECK(std::abs(cmp.rate_z) < 4.0);
  CHECK(std::abs(cmp.qber_z) < 4.0);
  CHECK(cmp.analytic_rate == sifted_rate(link).rate);
  CHECK(cmp.sifted_fraction == doctest::Approx(detection_probabilities(link).p_valid / 2.0));
}

TEST_CASE("a perfect link makes no errors") {
  LinkSpec s = *bright();
  s.det_leak0 = s.det_leak1 = 0.0;
  s.p_dark0 = s.p_dark1 = 0.0;
  s.p_after0 = s.p_after1 = 0.0;
  s.resid_phase = 0.0;
  const auto r = simulate_link(LinkParameters(s), 200'000, 5, small_chunks(0));
  CHECK(r.sifted_count > 0);
  CHECK(r.error_count == 0);
}

TEST_CASE("dark link: only dark counts and afterpulses") {
  const LinkParameters dark = bright().with_mean_photon_number(0.0);
  const auto r = simulate_link(dark, 1'000'000, 9, small_chunks(0));
  const AnalyticComparison cmp = compare_with_analytic(r, dark);
  CHECK(r.sifted_count > 0);
  CHECK(std::abs(cmp.rate_z) < 4.0);
  CHECK(r.estimated_qber == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("simulation input validation") {
  CHECK_THROWS_AS(simulate_link(bright(), 0, 1), DomainError);
  CHECK_THROWS_AS(simulate_link(bright(), 10, 1, SimulationOptions{0, 1}), DomainError);
}
