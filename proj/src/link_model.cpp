#include "qkd/link_model.hpp"

#include <cmath>

namespace qkd {

namespace {

// Leak fraction averaged over the two detectors, weighted by efficiency.
double leak_fraction(const LinkSpec& s) {
  return (s.det_eff0 * s.det_leak0 + s.det_eff1 * s.det_leak1) / (s.det_eff0 + s.det_eff1);
}

}  // namespace

double channel_attenuation(const LinkParameters& link) {
  return std::pow(0.1, 0.1 * (link->fiber_length * link->fiber_loss + link->rx_loss));
}

double detected_photon_number(const LinkParameters& link) {
  const LinkSpec& s = *link;
  return (s.det_eff0 + s.det_eff1) / 2.0 * s.mean_photon_number * channel_attenuation(link) /
         (1.0 + s.det_leak0 + s.det_leak1);
}

DetectionProbabilities detection_probabilities(const LinkParameters& link) {
  const LinkSpec& s = *link;
  const double p_dark = (s.p_dark0 + s.p_dark1) / 2.0;
  const double e = leak_fraction(s);
  const double c = detected_photon_number(link);

  DetectionProbabilities d;
  d.p_wrong_basis = prob_or({p_dark, 1.0 - std::exp(-c * (e + 0.5))});
  d.p_afterpulse = d.p_wrong_basis * (s.p_after0 + s.p_after1) / 2.0;
  d.p_wrong_basis = prob_or({d.p_wrong_basis, d.p_afterpulse});

  const double cos_half = std::cos(s.resid_phase / 2.0);
  const double sin_half = std::sin(s.resid_phase / 2.0);
  d.p_correct = prob_or({p_dark, d.p_afterpulse, 1.0 - std::exp(-c * (e + cos_half * cos_half))});
  d.p_incorrect = prob_or({p_dark, d.p_afterpulse, 1.0 - std::exp(-c * (e + sin_half * sin_half))});
  d.p_valid = prob_or({d.p_correct, d.p_incorrect});
  return d;
}

SiftedResult sifted_rate(const LinkParameters& link) {
  const DetectionProbabilities d = detection_probabilities(link);
  if (d.p_valid == 0.0) return {0.0, 0.0};
  return {d.p_valid / 2.0 * source_rate(link),
          (d.p_incorrect - d.p_correct * d.p_incorrect) / d.p_valid};
}

}  // namespace qkd
