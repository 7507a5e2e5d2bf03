#pragma once

// Parameter types for the BB84 link model and the shared probability helpers.
//
// Each parameter set comes in two layers: a plain aggregate (`*Spec`) that is
// convenient to fill in with designated initializers, and a validated,
// immutable wrapper that is what the numeric code accepts. Validation happens
// once, when the wrapper is constructed.

#include <initializer_list>
#include <numbers>
#include <span>
#include <string_view>

namespace qkd {

enum class EntropyEstimator { Bennett, Slutsky, Myers };
enum class SiftType { BB84 };
enum class PnsEstimator { OriginalBennett, RevisedBennett, GilbertHamrick };

std::string_view to_string(EntropyEstimator e);
std::string_view to_string(SiftType s);
std::string_view to_string(PnsEstimator p);

/// Raw physical description of a fiber link, its source and its two detectors.
/// Member defaults are the mark2-jan2004 configuration.
struct LinkSpec {
  double pulse_rate = 5e6;          // pulses/s
  double duty_cycle = 0.8;          // usable fraction of pulse slots
  double mean_photon_number = 0.1;  // mu, photons/pulse
  double fiber_length = 10.55;      // km
  double fiber_loss = 0.237;        // dB/km
  double rx_loss = 10.4;            // dB
  double resid_phase = 3 * std::numbers::pi / 180;  // radians
  double det_eff0 = 0.117;
  double det_eff1 = 0.117;
  double det_leak0 = 0.009;
  double det_leak1 = 0.009;
  double p_dark0 = 2.8e-5;  // per gate
  double p_dark1 = 2.8e-5;
  double p_after0 = 0.001;  // per detection
  double p_after1 = 0.001;

  bool operator==(const LinkSpec&) const = default;
};

class LinkParameters {
 public:
  /// Throws DomainError naming the first offending field.
  explicit LinkParameters(const LinkSpec& spec);

  const LinkSpec& operator*() const noexcept { return spec_; }
  const LinkSpec* operator->() const noexcept { return &spec_; }

  LinkParameters with_mean_photon_number(double mu) const;
  LinkParameters with_fiber_length(double km) const;

  bool operator==(const LinkParameters&) const = default;

 private:
  LinkSpec spec_;
};

struct ProtocolSpec {
  long block_size = 4096;  // bits per privacy-amplification block
  long n_edac_sets = 64;
  EntropyEstimator entropy_estimator = EntropyEstimator::Bennett;
  SiftType sift_type = SiftType::BB84;
  double confidence = 1e-6;

  bool operator==(const ProtocolSpec&) const = default;
};

class ProtocolParameters {
 public:
  explicit ProtocolParameters(const ProtocolSpec& spec);

  const ProtocolSpec& operator*() const noexcept { return spec_; }
  const ProtocolSpec* operator->() const noexcept { return &spec_; }

  bool operator==(const ProtocolParameters&) const = default;

 private:
  ProtocolSpec spec_;
};

struct EavesdropperSpec {
  PnsEstimator pns_estimator = PnsEstimator::RevisedBennett;
  // Fraction of the fiber loss Eve leaves in place; 0 = lossless substitution.
  double eve_chan = 0.0;
  double confidence = 1e-6;

  bool operator==(const EavesdropperSpec&) const = default;
};

class EavesdropperModel {
 public:
  explicit EavesdropperModel(const EavesdropperSpec& spec);

  const EavesdropperSpec& operator*() const noexcept { return spec_; }
  const EavesdropperSpec* operator->() const noexcept { return &spec_; }

  EavesdropperModel with_estimator(PnsEstimator estimator) const;

  bool operator==(const EavesdropperModel&) const = default;

 private:
  EavesdropperSpec spec_;
};

/// Sifted key rate (bits/s) and quantum bit error rate.
struct SiftedResult {
  double rate = 0.0;
  double qber = 0.0;
};

struct Scenario {
  LinkParameters link;
  ProtocolParameters proto;
  EavesdropperModel eve;
};

namespace presets {
// A 10.55 km link with 2.5 dB of fiber loss, 5 MHz source, mu = 0.1.
inline constexpr std::string_view kMark2Jan2004 = "mark2-jan2004";
Scenario mark2_jan2004();
}  // namespace presets

/// pulse_rate * duty_cycle, in pulses/s.
double source_rate(const LinkParameters& link) noexcept;

/// Probability that at least one of several independent events occurs:
/// 1 - prod(1 - p_i). Zero for an empty list. Throws DomainError when any
/// p_i lies outside [0, 1].
double prob_or(std::span<const double> ps);
double prob_or(std::initializer_list<double> ps);

}  // namespace qkd
