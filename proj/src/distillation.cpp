#include "qkd/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qkd/errors.hpp"
#include "qkd/link_model.hpp"
#include "qkd/numerics.hpp"

namespace qkd {

namespace {

constexpr double kRenyiOrderLo = 1.01;
constexpr double kRenyiOrderHi = 2.0;
constexpr double kRenyiOrderTol = 1e-8;

// Number of even-photon-number terms kept in the Gilbert-Hamrick series.
constexpr int kGhSeriesTerms = 20;

// Lower bound on the secret bits of a block given the Renyi order r.
double myers_renyi_bound(const MyersState& s, double r) {
  const double n = s.n;
  double h = (n - s.k) / (1.0 - r) * std::log2(std::pow(s.p_e, r) + std::pow(1.0 - s.p_e, r));
  const double t = std::log2(r / ((r - 1.0) * s.confidence));
  h -= std::log2(n + t + 1.0 + std::log2(n + t + 1.0 + std::log2(n + t + 1.0)));
  h -= std::log2(r / s.confidence) / (r - 1.0) + t + 2.0;
  return h;
}

}  // namespace

double edac_overhead(double qber, const ProtocolParameters& proto) {
  if (!(qber >= 0.0 && qber < 1.0)) {
    std::ostringstream msg;
    msg << "edac_overhead: qber " << qber << " is outside [0, 1)";
    throw DomainError(msg.str());
  }
  const double sets = static_cast<double>(proto->n_edac_sets) / static_cast<double>(proto->block_size);
  if (qber == 0.0) return sets;
  return qber * (1.0 - std::log2(qber)) + sets;
}

double entropy_bennett(double b, double e, double c) {
  const double t = 2.828427 * e;
  const double dev2 = 6.828427 * e;
  const double conf1 = std::numbers::sqrt2 * numerics::erf_inv(1.0 - c);
  return b - e - t - conf1 * std::sqrt(dev2) + 2.0 * std::log2(c);
}

double entropy_slutsky(double b, double e, double c) {
  const double conf1 = numerics::erf_inv(1.0 - c);
  const double e_prime = std::min(e / b + conf1 / std::sqrt(2.0 * b), 1.0 / 3.0);
  double t = (1.0 - 3.0 * e_prime) / (1.0 - e_prime);
  // 1.442695 = 1/ln 2
  t = (1.0 + 1.442695 * std::log(1.0 - 0.5 * t * t)) * (b - e);
  const double dev2 = (b - e) / 2.0;
  return b - e - t - conf1 * std::sqrt(dev2) + 2.0 * std::log2(c);
}

MyersState solve_myers(double n, double k, double c) {
  if (!(k >= 0.0 && k < n)) {
    std::ostringstream msg;
    msg << "entropy_myers requires 0 <= k < n, got n = " << n << ", k = " << k;
    throw DomainError(msg.str());
  }
  if (!(c > 0.0 && c < 1.0)) {
    std::ostringstream msg;
    msg << "entropy_myers confidence " << c << " is outside (0, 1)";
    throw DomainError(msg.str());
  }

  MyersState s;
  s.n = n;
  s.k = k;
  s.confidence = c;

  // The normal approximation needs both beta shape parameters above 1/2.
  const double shape_a = std::max(n - k, 1.0);
  const double shape_b = k > 0.5 ? k : 1.0;
  double seed = 1.0 - numerics::inv_beta_approx(shape_a, shape_b, c);
  seed = std::clamp(seed, 1e-12, 1.0 - 1e-12);

  double p = 0.0;
  try {
    p = numerics::find_root([&](double x) { return numerics::binom_tail_deficit(n, k, x, c); }, seed,
                            0.0, numerics::Bracket(0.0, 1.0));
  } catch (const ConvergenceError& err) {
    std::ostringstream msg;
    msg << "Myers tail bound for n = " << n << ", k = " << k << ": " << err.what();
    throw ConvergenceError(msg.str());
  }
  s.p_error = std::min(p, 1.0 / 3.0);
  const double q = s.p_error / (1.0 - s.p_error);
  s.p_e = 0.5 + std::sqrt(q * (1.0 - q));

  const auto best = numerics::minimize_scalar([&](double r) { return -myers_renyi_bound(s, r); },
                                              numerics::Bracket(kRenyiOrderLo, kRenyiOrderHi),
                                              kRenyiOrderTol);
  s.renyi_order = best.x;
  s.entropy = myers_renyi_bound(s, best.x);
  return s;
}

double entropy_myers(double n, double k, double c) { return solve_myers(n, k, c).entropy; }

EntropyEstimate entropy_estimate(double qber, const ProtocolParameters& proto) {
  const double b = static_cast<double>(proto->block_size);
  const double e = qber * b;
  const double c = proto->confidence;

  EntropyEstimate est;
  est.estimator = proto->entropy_estimator;
  switch (proto->entropy_estimator) {
    case EntropyEstimator::Bennett: est.raw_bits = entropy_bennett(b, e, c); break;
    case EntropyEstimator::Slutsky: est.raw_bits = entropy_slutsky(b, e, c); break;
    case EntropyEstimator::Myers: est.raw_bits = entropy_myers(b, e, c); break;
  }
  est.entropy_per_bit = est.raw_bits / b;
  return est;
}

double multiphoton_fraction(double mu) {
  if (!(mu >= 0.0)) {
    std::ostringstream msg;
    msg << "multiphoton_fraction: mu = " << mu << " is negative";
    throw DomainError(msg.str());
  }
  if (mu == 0.0) return 0.0;
  // mu e^-mu / (1 - e^-mu) == mu / (e^mu - 1)
  return 1.0 - mu / std::expm1(mu);
}

PnsDiscount pns_revised_bennett(const SiftedResult& sifted, double mu) {
  return {multiphoton_fraction(mu) * sifted.rate, PnsEstimator::RevisedBennett, false};
}

PnsDiscount pns_original_bennett(const SiftedResult& sifted, double mu) {
  return {sifted.rate * mu, PnsEstimator::OriginalBennett, false};
}

GilbertHamrickTerms gilbert_hamrick_terms(const LinkParameters& link, const EavesdropperModel& eve) {
  const LinkSpec& s = *link;
  const double mu = s.mean_photon_number;
  const double p0 = std::exp(-mu);
  const double p1 = p0 * mu;
  const double p2 = p1 * mu / 2.0;
  const double p2x = 1.0 - p0 - p1;
  const double s2 = std::numbers::sqrt2;
  const double y = std::pow(0.1, 0.1 * (s.fiber_length * s.fiber_loss * eve->eve_chan + s.rx_loss)) *
                   (s.det_eff0 + s.det_eff1) / 2.0;

  GilbertHamrickTerms m;
  // (e^{-mu y} - e^{-mu}(1 + mu (1-y))) / (1-y), rewritten so that y -> 1 is benign.
  const double loss = 1.0 - y;
  const double lost_fraction = loss > 0.0 ? p0 * (std::expm1(mu * loss) - mu * loss) / loss : 0.0;
  m.m1 = p2x - lost_fraction;
  m.m2 = p2 * y + 1.0 - p0 * (s2 * std::sinh(mu / s2) + 2.0 * std::cosh(mu / s2) - 1.0);
  m.m3 = p2 * y + p0 * (std::sinh(mu) - s2 * std::sinh(mu / s2));
  double p2k = p2;
  for (int k = 2; k <= kGhSeriesTerms; ++k) {
    p2k = p2k * mu * mu / (k * (4.0 * k - 2.0));
    m.m3 += p2k * std::max(1.0 - std::pow(1.0 - y, 2 * k - 1), 1.0 - std::pow(2.0, 1 - k));
  }
  return m;
}

PnsDiscount pns_gilbert_hamrick(const LinkParameters& link, const EavesdropperModel& eve) {
  const GilbertHamrickTerms m = gilbert_hamrick_terms(link, eve);
  const double worst = std::max({m.m1, m.m2, m.m3});
  return {worst * source_rate(link) / 2.0, PnsEstimator::GilbertHamrick, false};
}

PnsDiscount pns_discount(const LinkParameters& link, const SiftedResult& sifted, const EavesdropperModel& eve) {
  const double mu = link->mean_photon_number;
  switch (eve->pns_estimator) {
    case PnsEstimator::OriginalBennett: return pns_original_bennett(sifted, mu);
    case PnsEstimator::RevisedBennett: return pns_revised_bennett(sifted, mu);
    case PnsEstimator::GilbertHamrick: return pns_gilbert_hamrick(link, eve);
  }
  return {};
}

PnsDiscount with_confidence_term(const PnsDiscount& discount, double sifted_rate, double confidence) {
  const double mpd = discount.bits_per_second;
  double fraction = 0.0;
  if (sifted_rate > 0.0) {
    fraction = std::clamp(mpd / sifted_rate, 0.0, 1.0);
  } else if (mpd > 0.0) {
    fraction = 1.0;
  }
  const double margin = std::numbers::sqrt2 * numerics::erf_inv(1.0 - confidence) *
                        std::sqrt(mpd * (1.0 - fraction));
  return {mpd + margin, discount.estimator, true};
}

RateBreakdown evaluate_rate(const LinkParameters& link, const ProtocolParameters& proto,
                            const EavesdropperModel& eve) {
  RateBreakdown out;
  out.sifted = sifted_rate(link);
  out.overhead = edac_overhead(out.sifted.qber, proto);
  out.entropy = entropy_estimate(out.sifted.qber, proto);
  out.pns = with_confidence_term(pns_discount(link, out.sifted, eve), out.sifted.rate, eve->confidence);
  out.distilled =
      std::max(out.sifted.rate * (out.entropy.entropy_per_bit - out.overhead) - out.pns.bits_per_second, 0.0);
  return out;
}

double distilled_rate(const LinkParameters& link, const ProtocolParameters& proto,
                      const EavesdropperModel& eve) {
  return evaluate_rate(link, proto, eve).distilled;
}

}  // namespace qkd
