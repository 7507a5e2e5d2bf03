#pragma once

// Scenario files: `key = value` lines, `#` comments. Keys mirror the model's
// variable names (pulseRate, mpn, fiberLength, ...). Anything not set takes
// the mark2-jan2004 preset value.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qkd/core.hpp"
#include "qkd/numerics.hpp"

namespace qkd {

struct SweepSettings {
  double mu_min = 0.01;
  double mu_max = 3.0;
  std::size_t mu_steps = 150;
  double dist_min = 0.0;
  double dist_max = 50.0;
  std::size_t dist_steps = 51;
  double mu_search_lo = 0.01;  // optimal-mu bracket
  double mu_search_hi = 5.0;
  double tol = 1e-4;
  std::uint64_t pulses = 10'000'000;  // Monte-Carlo
  std::uint64_t seed = 1;

  bool operator==(const SweepSettings&) const = default;
};

struct OutputSettings {
  std::string format = "csv";
  std::string path;  // empty: standard output

  bool operator==(const OutputSettings&) const = default;
};

struct ScenarioConfig {
  LinkParameters link;
  ProtocolParameters proto;
  EavesdropperModel eve;
  SweepSettings sweep;
  OutputSettings output;

  bool operator==(const ScenarioConfig&) const = default;
};

/// The mark2-jan2004 preset with default sweep and output settings.
ScenarioConfig default_config();

/// Rejected configuration text. The message names the key, the line and the
/// legal range or values.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& message);
  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

ScenarioConfig parse_config(std::string_view text);

/// Applies `key = value` lines on top of an existing configuration.
ScenarioConfig apply_config(ScenarioConfig base, std::string_view text);

/// Every key with its current value; parse_config(emit_config(c)) == c.
std::string emit_config(const ScenarioConfig& config);

/// Parses a PNS estimator name: OriginalBennett/RevisedBennett/GilbertHamrick
/// or the short forms original/revised/gh. Throws std::invalid_argument.
PnsEstimator parse_pns_estimator(std::string_view name);

/// Bennett/Slutsky/Myers (case-insensitive). Throws std::invalid_argument.
EntropyEstimator parse_entropy_estimator(std::string_view name);

}  // namespace qkd
