#include "qkd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "qkd/emit.hpp"
#include "qkd/errors.hpp"

namespace qkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Draft {
  LinkSpec link;
  ProtocolSpec proto;
  EavesdropperSpec eve;
  SweepSettings sweep;
  OutputSettings output;
};

Draft draft_of(const ScenarioConfig& c) { return {*c.link, *c.proto, *c.eve, c.sweep, c.output}; }

struct Range {
  double lo;
  double hi;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double v) const {
    if (std::isnan(v)) return false;
    const bool above = lo_open ? v > lo : v >= lo;
    const bool below = hi_open ? v < hi : v <= hi;
    return above && below;
  }
  std::string describe() const {
    std::ostringstream out;
    out << (lo_open || std::isinf(lo) ? '(' : '[') << (std::isinf(lo) ? "-inf" : format_double(lo)) << ", "
        << (std::isinf(hi) ? "inf" : format_double(hi)) << (hi_open || std::isinf(hi) ? ')' : ']');
    return out.str();
  }
};

constexpr Range kFraction{0.0, 1.0};
constexpr Range kNonNegative{0.0, kInf, false, true};
constexpr Range kPositive{0.0, kInf, true, true};
constexpr Range kOpenUnit{0.0, 1.0, true, true};
constexpr Range kFinite{-kInf, kInf, true, true};

// A rejected value; the caller adds key and line.
struct BadValue {
  std::string detail;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_real(std::string_view text, const Range& range) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw BadValue{"cannot parse '" + std::string(text) + "' as a number"};
  }
  if (!range.contains(v)) {
    throw BadValue{"value " + std::string(text) + " is out of range; legal range " + range.describe()};
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view text, Int lo) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) {
    throw BadValue{"value " + std::string(text) + " is out of range; legal range [" + std::to_string(lo) + ", " +
                   std::to_string(std::numeric_limits<Int>::max()) + "]"};
  }
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw BadValue{"cannot parse '" + std::string(text) + "' as an integer"};
  }
  if (v < lo) {
    throw BadValue{"value " + std::string(text) + " is out of range; legal range [" + std::to_string(lo) + ", " +
                   std::to_string(std::numeric_limits<Int>::max()) + "]"};
  }
  return v;
}

// Shortest decimal degree string that converts back to exactly `radians`.
std::string degrees_for_radians(double radians) {
  const double approx = radians * 180.0 / std::numbers::pi;
  const auto to_radians = [](double deg) { return deg * std::numbers::pi / 180.0; };
  double candidate = approx;
  for (int i = 0; i < 4; ++i) candidate = std::nextafter(candidate, -kInf);
  for (int i = 0; i < 9; ++i, candidate = std::nextafter(candidate, kInf)) {
    const std::string text = format_double(candidate);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    if (to_radians(back) == radians) return text;
  }
  return format_double(approx);
}

struct KeyDef {
  std::string_view name;
  std::function<void(Draft&, std::string_view)> set;
  std::function<std::string(const Draft&)> get;
};

template <typename Field>
KeyDef real_key(std::string_view name, Field field, Range range) {
  return {name, [field, range](Draft& d, std::string_view v) { field(d) = parse_real(v, range); },
          [field](const Draft& d) { return format_double(field(d)); }};
}

template <typename Field>
KeyDef integer_key(std::string_view name, Field field, long long lo) {
  return {name,
          [field, lo](Draft& d, std::string_view v) {
            using Int = std::remove_reference_t<decltype(field(d))>;
            field(d) = parse_integer<Int>(v, static_cast<Int>(lo));
          },
          [field](const Draft& d) { return std::to_string(field(d)); }};
}

template <typename Field, typename Parse>
KeyDef enum_key(std::string_view name, Field field, Parse parse) {
  return {name,
          [field, parse](Draft& d, std::string_view v) {
            try {
              field(d) = parse(unquote(v));
            } catch (const std::invalid_argument& err) {
              throw BadValue{err.what()};
            }
          },
          [field](const Draft& d) { return std::string(to_string(field(d))); }};
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back(real_key("pulseRate", [](auto& d) -> auto& { return d.link.pulse_rate; }, kPositive));
    t.push_back(real_key("dutyCycle", [](auto& d) -> auto& { return d.link.duty_cycle; }, kFraction));
    t.push_back(real_key("mpn", [](auto& d) -> auto& { return d.link.mean_photon_number; }, kNonNegative));
    t.push_back(real_key("fiberLength", [](auto& d) -> auto& { return d.link.fiber_length; }, kNonNegative));
    t.push_back(real_key("fiberLoss", [](auto& d) -> auto& { return d.link.fiber_loss; }, kNonNegative));
    t.push_back(real_key("rxLoss", [](auto& d) -> auto& { return d.link.rx_loss; }, kNonNegative));
    t.push_back({"residPhaseDeg",
                 [](Draft& d, std::string_view v) {
                   d.link.resid_phase = parse_real(v, kFinite) * std::numbers::pi / 180.0;
                 },
                 [](const Draft& d) { return degrees_for_radians(d.link.resid_phase); }});
    t.push_back(real_key("detEff0", [](auto& d) -> auto& { return d.link.det_eff0; }, kFraction));
    t.push_back(real_key("detEff1", [](auto& d) -> auto& { return d.link.det_eff1; }, kFraction));
    t.push_back(real_key("detLeak0", [](auto& d) -> auto& { return d.link.det_leak0; }, kFraction));
    t.push_back(real_key("detLeak1", [](auto& d) -> auto& { return d.link.det_leak1; }, kFraction));
    t.push_back(real_key("pDark0", [](auto& d) -> auto& { return d.link.p_dark0; }, kFraction));
    t.push_back(real_key("pDark1", [](auto& d) -> auto& { return d.link.p_dark1; }, kFraction));
    t.push_back(real_key("pAfter0", [](auto& d) -> auto& { return d.link.p_after0; }, kFraction));
    t.push_back(real_key("pAfter1", [](auto& d) -> auto& { return d.link.p_after1; }, kFraction));

    t.push_back(integer_key("blockSize", [](auto& d) -> auto& { return d.proto.block_size; }, 1));
    t.push_back(integer_key("nEdacSets", [](auto& d) -> auto& { return d.proto.n_edac_sets; }, 0));
    t.push_back(enum_key(
        "estType", [](auto& d) -> auto& { return d.proto.entropy_estimator; }, parse_entropy_estimator));
    // One residual probability drives both the entropy and the PNS margins.
    t.push_back({"confidence",
                 [](Draft& d, std::string_view v) { d.proto.confidence = d.eve.confidence = parse_real(v, kOpenUnit); },
                 [](const Draft& d) { return format_double(d.proto.confidence); }});
    t.push_back(enum_key(
        "siftType", [](auto& d) -> auto& { return d.proto.sift_type; },
        [](std::string_view v) {
          if (lower(v) != "bb84") throw std::invalid_argument("unknown sift type '" + std::string(v) + "'; legal values: BB84");
          return SiftType::BB84;
        }));
    t.push_back(enum_key("pnsType", [](auto& d) -> auto& { return d.eve.pns_estimator; },
                                       parse_pns_estimator));
    t.push_back(real_key("eveChan", [](auto& d) -> auto& { return d.eve.eve_chan; }, kFraction));

    t.push_back(real_key("muMin", [](auto& d) -> auto& { return d.sweep.mu_min; }, kNonNegative));
    t.push_back(real_key("muMax", [](auto& d) -> auto& { return d.sweep.mu_max; }, kNonNegative));
    t.push_back(integer_key("muSteps", [](auto& d) -> auto& { return d.sweep.mu_steps; }, 1));
    t.push_back(real_key("distMin", [](auto& d) -> auto& { return d.sweep.dist_min; }, kNonNegative));
    t.push_back(real_key("distMax", [](auto& d) -> auto& { return d.sweep.dist_max; }, kNonNegative));
    t.push_back(integer_key("distSteps", [](auto& d) -> auto& { return d.sweep.dist_steps; }, 1));
    t.push_back(real_key("muSearchLo", [](auto& d) -> auto& { return d.sweep.mu_search_lo; }, kPositive));
    t.push_back(real_key("muSearchHi", [](auto& d) -> auto& { return d.sweep.mu_search_hi; }, kPositive));
    t.push_back(real_key("tol", [](auto& d) -> auto& { return d.sweep.tol; }, kPositive));
    t.push_back(integer_key("pulses", [](auto& d) -> auto& { return d.sweep.pulses; }, 1));
    t.push_back(integer_key("seed", [](auto& d) -> auto& { return d.sweep.seed; }, 0));

    t.push_back({"format",
                 [](Draft& d, std::string_view v) {
                   if (lower(unquote(v)) != "csv") throw BadValue{"unknown format '" + std::string(v) + "'; legal values: csv"};
                   d.output.format = "csv";
                 },
                 [](const Draft& d) { return d.output.format; }});
    t.push_back({"out", [](Draft& d, std::string_view v) { d.output.path = std::string(unquote(v)); },
                 [](const Draft& d) { return d.output.path.empty() ? std::string() : "\"" + d.output.path + "\""; }});
    return t;
  }();
  return table;
}

const KeyDef* find_key(std::string_view name) {
  for (const KeyDef& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void require_order(double lo, double hi, std::size_t steps, std::string_view hi_key,
                   const std::map<std::string, std::size_t, std::less<>>& lines) {
  if (steps > 1 && !(lo < hi)) {
    const auto it = lines.find(hi_key);
    throw ConfigError(std::string(hi_key), it == lines.end() ? 0 : it->second,
                      "must exceed its lower bound " + format_double(lo) + " when more than one step is requested");
  }
}

ScenarioConfig finish(const Draft& d, const std::map<std::string, std::size_t, std::less<>>& lines) {
  require_order(d.sweep.mu_min, d.sweep.mu_max, d.sweep.mu_steps, "muMax", lines);
  require_order(d.sweep.dist_min, d.sweep.dist_max, d.sweep.dist_steps, "distMax", lines);
  require_order(d.sweep.mu_search_lo, d.sweep.mu_search_hi, 2, "muSearchHi", lines);
  try {
    return {LinkParameters(d.link), ProtocolParameters(d.proto), EavesdropperModel(d.eve), d.sweep, d.output};
  } catch (const DomainError& err) {
    throw ConfigError("link", 0, err.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& message)
    : std::invalid_argument((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + key + ": " +
                            message),
      key_(std::move(key)),
      line_(line) {}

ScenarioConfig default_config() {
  const Scenario s = presets::mark2_jan2004();
  return {s.link, s.proto, s.eve, SweepSettings{}, OutputSettings{}};
}

PnsEstimator parse_pns_estimator(std::string_view name) {
  const std::string n = lower(name);
  if (n == "originalbennett" || n == "original") return PnsEstimator::OriginalBennett;
  if (n == "revisedbennett" || n == "revised") return PnsEstimator::RevisedBennett;
  if (n == "gilberthamrick" || n == "gh") return PnsEstimator::GilbertHamrick;
  throw std::invalid_argument("unknown PNS estimator '" + std::string(name) +
                              "'; legal values: OriginalBennett, RevisedBennett, GilbertHamrick");
}

EntropyEstimator parse_entropy_estimator(std::string_view name) {
  const std::string n = lower(name);
  if (n == "bennett") return EntropyEstimator::Bennett;
  if (n == "slutsky") return EntropyEstimator::Slutsky;
  if (n == "myers") return EntropyEstimator::Myers;
  throw std::invalid_argument("unknown entropy estimator '" + std::string(name) +
                              "'; legal values: Bennett, Slutsky, Myers");
}

ScenarioConfig apply_config(ScenarioConfig base, std::string_view text) {
  Draft draft = draft_of(base);
  std::map<std::string, std::size_t, std::less<>> seen;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const KeyDef* def = find_key(key);
    if (def == nullptr) throw ConfigError(std::string(key), line_no, "unknown key");
    if (seen.contains(key)) {
      throw ConfigError(std::string(key), line_no, "duplicate key (first set on line " +
                                                      std::to_string(seen.find(key)->second) + ")");
    }
    seen.emplace(std::string(key), line_no);
    try {
      def->set(draft, value);
    } catch (const BadValue& bad) {
      throw ConfigError(std::string(key), line_no, bad.detail);
    }
  }
  return finish(draft, seen);
}

ScenarioConfig parse_config(std::string_view text) { return apply_config(default_config(), text); }

std::string emit_config(const ScenarioConfig& config) {
  const Draft d = draft_of(config);
  std::string out = "# QKD link scenario\n";
  for (const KeyDef& k : key_table()) {
    const std::string value = k.get(d);
    out += std::string(k.name) + " =" + (value.empty() ? "" : " " + value) + "\n";
  }
  return out;
}

}  // namespace qkd
