#pragma once

// Distillation half of the model: error-correction overhead, privacy
// amplification entropy estimates and the multi-photon (PNS) discount.

#include "qkd/core.hpp"

namespace qkd {

struct EntropyEstimate {
  double raw_bits = 0.0;         // secret bits per block, before division
  double entropy_per_bit = 0.0;  // raw_bits / block_size, unclamped
  EntropyEstimator estimator = EntropyEstimator::Bennett;

  /// Per-bit entropy clamped at zero, for display.
  double reported_per_bit() const noexcept { return entropy_per_bit > 0.0 ? entropy_per_bit : 0.0; }
};

struct PnsDiscount {
  double bits_per_second = 0.0;
  PnsEstimator estimator = PnsEstimator::RevisedBennett;
  bool includes_confidence_term = false;
};

/// Intermediate state of the Myers-Pearson estimate for one block.
struct MyersState {
  double n = 0.0;           // sifted bits in the block
  double k = 0.0;           // observed errors
  double confidence = 0.0;
  double p_error = 0.0;     // upper bound on the error probability, clamped to 1/3
  double p_e = 0.0;         // 1/2 + sqrt(q (1 - q)), q = p_error / (1 - p_error)
  double renyi_order = 0.0; // maximizing r in [1.01, 2]
  double entropy = 0.0;     // bits
};

/// Fraction of the sifted key disclosed by error correction:
/// qber (1 - log2 qber) + n_edac_sets / block_size. Throws DomainError unless 0 <= qber < 1.
double edac_overhead(double qber, const ProtocolParameters& proto);

/// Secret bits left in a block of `b` bits with `e` errors, at residual probability `c`.
double entropy_bennett(double b, double e, double c);
double entropy_slutsky(double b, double e, double c);
double entropy_myers(double n, double k, double c);

/// Full Myers-Pearson pipeline: tail-bound root, p_e, and the Renyi-order
/// maximization. Throws ConvergenceError if the root solve fails.
MyersState solve_myers(double n, double k, double c);

/// Dispatches on proto.entropy_estimator with e = qber * block_size.
EntropyEstimate entropy_estimate(double qber, const ProtocolParameters& proto);

/// Poisson multi-photon fraction among non-empty pulses: 1 - mu e^-mu / (1 - e^-mu).
double multiphoton_fraction(double mu);

PnsDiscount pns_revised_bennett(const SiftedResult& sifted, double mu);
PnsDiscount pns_original_bennett(const SiftedResult& sifted, double mu);

struct GilbertHamrickTerms {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

/// The three candidate multi-photon fractions of the Gilbert-Hamrick bound.
GilbertHamrickTerms gilbert_hamrick_terms(const LinkParameters& link, const EavesdropperModel& eve);

/// max(m1, m2, m3) * source_rate / 2. Does not depend on the sifted rate.
PnsDiscount pns_gilbert_hamrick(const LinkParameters& link, const EavesdropperModel& eve);

/// Dispatches on eve.pns_estimator.
PnsDiscount pns_discount(const LinkParameters& link, const SiftedResult& sifted, const EavesdropperModel& eve);

/// Adds the statistical fluctuation margin sqrt(2) erfinv(1 - c) sqrt(mpd (1 - mpd / sift)).
/// The ratio mpd / sift is clamped to [0, 1].
PnsDiscount with_confidence_term(const PnsDiscount& discount, double sifted_rate, double confidence);

struct RateBreakdown {
  SiftedResult sifted;
  double overhead = 0.0;
  EntropyEstimate entropy;
  PnsDiscount pns;  // includes the confidence term
  double distilled = 0.0;
};

RateBreakdown evaluate_rate(const LinkParameters& link, const ProtocolParameters& proto,
                            const EavesdropperModel& eve);

/// Distilled secret-key rate in bits/s: max(sift (entropy - overhead) - pns, 0).
double distilled_rate(const LinkParameters& link, const ProtocolParameters& proto,
                      const EavesdropperModel& eve);

}  // namespace qkd
