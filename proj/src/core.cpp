#include "qkd/core.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qkd/errors.hpp"

namespace qkd {

namespace {

[[noreturn]] void reject(std::string_view field, double value, std::string_view range) {
  std::ostringstream msg;
  msg << field << " = " << value << " is outside " << range;
  throw DomainError(msg.str());
}

void require_fraction(std::string_view field, double v) {
  if (!(v >= 0.0 && v <= 1.0)) reject(field, v, "[0, 1]");
}

void require_nonnegative(std::string_view field, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) reject(field, v, "[0, inf)");
}

}  // namespace

std::string_view to_string(EntropyEstimator e) {
  switch (e) {
    case EntropyEstimator::Bennett: return "Bennett";
    case EntropyEstimator::Slutsky: return "Slutsky";
    case EntropyEstimator::Myers: return "Myers";
  }
  return "?";
}

std::string_view to_string(SiftType) { return "BB84"; }

std::string_view to_string(PnsEstimator p) {
  switch (p) {
    case PnsEstimator::OriginalBennett: return "OriginalBennett";
    case PnsEstimator::RevisedBennett: return "RevisedBennett";
    case PnsEstimator::GilbertHamrick: return "GilbertHamrick";
  }
  return "?";
}

LinkParameters::LinkParameters(const LinkSpec& s) : spec_(s) {
  if (!(s.pulse_rate > 0.0) || !std::isfinite(s.pulse_rate)) reject("pulse_rate", s.pulse_rate, "(0, inf)");
  require_fraction("duty_cycle", s.duty_cycle);
  require_nonnegative("mean_photon_number", s.mean_photon_number);
  require_nonnegative("fiber_length", s.fiber_length);
  require_nonnegative("fiber_loss", s.fiber_loss);
  require_nonnegative("rx_loss", s.rx_loss);
  if (!std::isfinite(s.resid_phase)) reject("resid_phase", s.resid_phase, "finite reals");
  require_fraction("det_eff0", s.det_eff0);
  require_fraction("det_eff1", s.det_eff1);
  if (s.det_eff0 + s.det_eff1 <= 0.0) reject("det_eff0 + det_eff1", s.det_eff0 + s.det_eff1, "(0, 2]");
  require_fraction("det_leak0", s.det_leak0);
  require_fraction("det_leak1", s.det_leak1);
  require_fraction("p_dark0", s.p_dark0);
  require_fraction("p_dark1", s.p_dark1);
  require_fraction("p_after0", s.p_after0);
  require_fraction("p_after1", s.p_after1);
}

LinkParameters LinkParameters::with_mean_photon_number(double mu) const {
  LinkSpec s = spec_;
  s.mean_photon_number = mu;
  return LinkParameters(s);
}

LinkParameters LinkParameters::with_fiber_length(double km) const {
  LinkSpec s = spec_;
  s.fiber_length = km;
  return LinkParameters(s);
}

ProtocolParameters::ProtocolParameters(const ProtocolSpec& s) : spec_(s) {
  if (s.block_size < 1) reject("block_size", static_cast<double>(s.block_size), "[1, inf)");
  if (s.n_edac_sets < 0) reject("n_edac_sets", static_cast<double>(s.n_edac_sets), "[0, inf)");
  if (!(s.confidence > 0.0 && s.confidence < 1.0)) reject("confidence", s.confidence, "(0, 1)");
}

EavesdropperModel::EavesdropperModel(const EavesdropperSpec& s) : spec_(s) {
  require_fraction("eve_chan", s.eve_chan);
  if (!(s.confidence > 0.0 && s.confidence < 1.0)) reject("confidence", s.confidence, "(0, 1)");
}

EavesdropperModel EavesdropperModel::with_estimator(PnsEstimator estimator) const {
  EavesdropperSpec s = spec_;
  s.pns_estimator = estimator;
  return EavesdropperModel(s);
}

Scenario presets::mark2_jan2004() {
  return Scenario{LinkParameters(LinkSpec{}), ProtocolParameters(ProtocolSpec{}),
                  EavesdropperModel(EavesdropperSpec{})};
}

double source_rate(const LinkParameters& link) noexcept { return link->pulse_rate * link->duty_cycle; }

double prob_or(std::span<const double> ps) {
  double q = 1.0;
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) reject("prob_or argument", p, "[0, 1]");
    q *= 1.0 - p;
  }
  return 1.0 - q;
}

double prob_or(std::initializer_list<double> ps) { return prob_or(std::span<const double>(ps.begin(), ps.size())); }

}  // namespace qkd
