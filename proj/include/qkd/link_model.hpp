#pragma once

// Physics half of the model: per-gate detection probabilities, sifted key
// rate and QBER of a BB84 fiber link.

#include "qkd/core.hpp"

namespace qkd {

struct DetectionProbabilities {
  double p_correct = 0.0;      // the matching detector clicks
  double p_incorrect = 0.0;    // the other detector clicks
  double p_valid = 0.0;        // either clicks
  double p_wrong_basis = 0.0;  // a detector clicks when the bases differ, incl. afterpulse feedback
  double p_afterpulse = 0.0;   // afterpulse probability per gate
};

/// Mean detected photon number per detector before the basis/phase split.
double detected_photon_number(const LinkParameters& link);

/// Overall channel transmission 10^(-(L * fiber_loss + rx_loss) / 10).
double channel_attenuation(const LinkParameters& link);

DetectionProbabilities detection_probabilities(const LinkParameters& link);

/// Sifted rate = p_valid / 2 * source_rate; QBER counts gates where only the
/// wrong detector clicked. A link with p_valid = 0 reports rate 0, QBER 0.
SiftedResult sifted_rate(const LinkParameters& link);

}  // namespace qkd
