#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "qkd/core.hpp"
#include "qkd/errors.hpp"

using namespace qkd;

TEST_CASE("mark2-jan2004 preset carries the reference link") {
  const Scenario s = presets::mark2_jan2004();
  CHECK(s.link->pulse_rate == 5e6);
  CHECK(s.link->duty_cycle == 0.8);
  CHECK(s.link->mean_photon_number == 0.1);
  CHECK(s.link->fiber_length == 10.55);
  CHECK(s.link->fiber_loss == 0.237);
  CHECK(s.link->rx_loss == 10.4);
  CHECK(s.link->resid_phase == doctest::Approx(0.05235987755982988).epsilon(1e-15));
  CHECK(s.link->det_eff0 == 0.117);
  CHECK(s.link->det_eff1 == 0.117);
  CHECK(s.link->det_leak0 == 0.009);
  CHECK(s.link->p_dark1 == 2.8e-5);
  CHECK(s.link->p_after0 == 0.001);
  CHECK(s.proto->block_size == 4096);
  CHECK(s.proto->n_edac_sets == 64);
  CHECK(s.proto->entropy_estimator == EntropyEstimator::Bennett);
  CHECK(s.proto->sift_type == SiftType::BB84);
  CHECK(s.proto->confidence == 1e-6);
  CHECK(s.eve->eve_chan == 0.0);
  CHECK(s.eve->pns_estimator == PnsEstimator::RevisedBennett);
}

TEST_CASE("source_rate") {
  CHECK(source_rate(LinkParameters(LinkSpec{})) == 4e6);
  CHECK(source_rate(LinkParameters(LinkSpec{.duty_cycle = 1.0})) == 5e6);
  CHECK(source_rate(LinkParameters(LinkSpec{.duty_cycle = 0.0})) == 0.0);
}

TEST_CASE("prob_or closed forms") {
  CHECK(prob_or({}) == 0.0);
  CHECK(prob_or({0.37}) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(prob_or({0.5, 0.5}) == 0.75);
  for (double a : {0.0, 0.3, 1.0}) {
    for (double b : {0.0, 0.3, 1.0}) {
      CHECK(prob_or({a, b}) == doctest::Approx(a + b - a * b).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(prob_or({0.2, 1.5}), DomainError);
  CHECK_THROWS_AS(prob_or({-0.1}), DomainError);
}

TEST_CASE("prob_or properties on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ps(1 + trial % 6);
    for (double& p : ps) p = unit(rng);
    const double base = prob_or(ps);

    std::vector<double> shuffled = ps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(prob_or(shuffled) == doctest::Approx(base).epsilon(1e-14));

    std::vector<double> with_zero = ps;
    with_zero.push_back(0.0);
    CHECK(prob_or(with_zero) == base);

    std::vector<double> with_one = ps;
    with_one.push_back(1.0);
    CHECK(prob_or(with_one) == 1.0);

    std::vector<double> raised = ps;
    raised[0] = raised[0] + (1.0 - raised[0]) * unit(rng);
    CHECK(prob_or(raised) >= base);
  }
}

TEST_CASE("parameter validation happens at construction") {
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.pulse_rate = 0.0}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.duty_cycle = 1.2}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.mean_photon_number = -0.1}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.fiber_length = -1.0}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.rx_loss = -1.0}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.det_eff1 = 1.01}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.p_dark0 = -1e-9}), DomainError);
  CHECK_THROWS_AS(LinkParameters(LinkSpec{.p_after1 = 2.0}), DomainError);
  CHECK_THROWS_AS(ProtocolParameters(ProtocolSpec{.block_size = 0}), DomainError);
  CHECK_THROWS_AS(ProtocolParameters(ProtocolSpec{.n_edac_sets = -1}), DomainError);
  CHECK_THROWS_AS(ProtocolParameters(ProtocolSpec{.confidence = 1.0}), DomainError);
  CHECK_THROWS_AS(EavesdropperModel(EavesdropperSpec{.eve_chan = 1.5}), DomainError);

  const LinkParameters link(LinkSpec{});
  CHECK_THROWS_AS(link.with_mean_photon_number(-1.0), DomainError);
  CHECK(link.with_fiber_length(50.0)->fiber_length == 50.0);
  CHECK(link->fiber_length == 10.55);
}
