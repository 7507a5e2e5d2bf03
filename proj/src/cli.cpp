#include "qkd/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include "qkd/distillation.hpp"
#include "qkd/emit.hpp"
#include "qkd/montecarlo.hpp"
#include "qkd/optimizer.hpp"

namespace qkd::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::Rate, "rate"},
    {Command::SweepMu, "sweep-mu"},
    {Command::Surface, "surface"},
    {Command::OptimalMu, "optimal-mu"},
    {Command::OptimalMuCurve, "optimal-mu-curve"},
    {Command::CompareEstimates, "compare-estimates"},
    {Command::MonteCarlo, "montecarlo"},
}};

using Table = std::vector<std::pair<std::string, std::string>>;

void print_table(std::ostream& out, const Table& rows) {
  std::size_t width = 0;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  for (const auto& [key, value] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << key << value << '\n';
}

// Destination for tables and CSV: the configured file, or `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

void write_plot(const ScenarioConfig& config, std::string_view title, PlotKind kind,
                const std::vector<std::string>& header, std::ostream& err) {
  const std::string script_path = config.output.path + ".gp";
  std::ofstream gp(script_path, std::ios::binary);
  if (!gp) throw std::runtime_error("cannot open plot script '" + script_path + "'");
  gp << plot_script(config.output.path, title, kind, header);
  err << "wrote " << script_path << '\n';
}

bool report_failures(const std::vector<PointFailure>& failures, std::ostream& err) {
  for (const PointFailure& f : failures) err << "error: " << f.message << '\n';
  return !failures.empty();
}

int run_rate(const ScenarioConfig& c, Sink& sink) {
  const RateBreakdown r = evaluate_rate(c.link, c.proto, c.eve);
  print_table(sink.stream(), {
                                 {"mean_photon_number", format_double(c.link->mean_photon_number)},
                                 {"fiber_length_km", format_double(c.link->fiber_length)},
                                 {"entropy_estimator", std::string(to_string(c.proto->entropy_estimator))},
                                 {"pns_estimator", std::string(to_string(c.eve->pns_estimator))},
                                 {"sifted_rate_bps", format_double(r.sifted.rate)},
                                 {"qber", format_double(r.sifted.qber)},
                                 {"edac_overhead", format_double(r.overhead)},
                                 {"entropy_per_bit", format_double(r.entropy.reported_per_bit())},
                                 {"pns_discount_bps", format_double(r.pns.bits_per_second)},
                                 {"distilled_rate_bps", format_double(r.distilled)},
                             });
  return 0;
}

int run_sweep_mu(const ScenarioConfig& c, const RunFlags& flags, Sink& sink, std::ostream& err) {
  const auto grid = linspace(c.sweep.mu_min, c.sweep.mu_max, c.sweep.mu_steps);
  const RateCurve curve = sweep_mu(c.link, c.proto, c.eve, grid, flags.threads);
  if (report_failures(curve.failures, err)) return 1;
  const std::vector<std::string> header{"mu", "rate"};
  CsvWriter csv(sink.stream(), header);
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i], curve.rates[i]});
  if (flags.plot) write_plot(c, "Distilled key rate vs mean photon number", PlotKind::Lines, header, err);
  return 0;
}

int run_surface(const ScenarioConfig& c, const RunFlags& flags, Sink& sink, std::ostream& err) {
  const auto distances = linspace(c.sweep.dist_min, c.sweep.dist_max, c.sweep.dist_steps);
  const auto mus = linspace(c.sweep.mu_min, c.sweep.mu_max, c.sweep.mu_steps);
  const RateSurface surface = sweep_surface(c.link, c.proto, c.eve, distances, mus, flags.threads);
  if (report_failures(surface.failures, err)) return 1;
  const std::vector<std::string> header{"distance_km", "mu", "rate"};
  CsvWriter csv(sink.stream(), header);
  for (std::size_t i = 0; i < distances.size(); ++i) {
    for (std::size_t j = 0; j < mus.size(); ++j) csv.row({distances[i], mus[j], surface.at(i, j)});
  }
  if (flags.plot) write_plot(c, "Distilled key rate vs distance and mean photon number", PlotKind::Surface, header, err);
  return 0;
}

OptimizeOptions optimize_options(const ScenarioConfig& c) {
  return {numerics::Bracket(c.sweep.mu_search_lo, c.sweep.mu_search_hi), c.sweep.tol, 32};
}

int run_optimal_mu(const ScenarioConfig& c, Sink& sink) {
  const OptimalMuPoint p = optimal_mu(c.link, c.proto, c.eve, optimize_options(c));
  print_table(sink.stream(), {
                                 {"distance_km", format_double(p.distance)},
                                 {"mu_opt", p.mu_opt ? format_double(*p.mu_opt) : "undefined"},
                                 {"rate_opt_bps", format_double(p.rate_opt)},
                                 {"kind", std::string(to_string(p.kind))},
                             });
  return 0;
}

int run_optimal_mu_curve(const ScenarioConfig& c, const RunFlags& flags, Sink& sink, std::ostream& err) {
  const auto distances = linspace(c.sweep.dist_min, c.sweep.dist_max, c.sweep.dist_steps);
  const auto points = optimal_mu_vs_distance(c.link, c.proto, c.eve, distances, optimize_options(c), flags.threads);
  const std::vector<std::string> header{"distance_km", "mu_opt", "rate_opt", "kind"};
  CsvWriter csv(sink.stream(), header);
  for (const OptimalMuPoint& p : points) {
    csv.row(std::vector<std::string>{format_double(p.distance), p.mu_opt ? format_double(*p.mu_opt) : "",
                                     format_double(p.rate_opt), std::string(to_string(p.kind))});
  }
  if (flags.plot) write_plot(c, "Optimal mean photon number vs fiber length", PlotKind::Lines, {"distance_km", "mu_opt"}, err);
  return 0;
}

int run_compare(const ScenarioConfig& c, const RunFlags& flags, Sink& sink, std::ostream& err) {
  const auto grid = linspace(c.sweep.mu_min, c.sweep.mu_max, c.sweep.mu_steps);
  const auto curves = compare_estimates(c.link, c.proto, c.eve, grid, flags.threads);
  bool failed = false;
  for (const RateCurve& curve : curves) failed = report_failures(curve.failures, err) || failed;
  if (failed) return 1;
  const std::vector<std::string> header{"mu", "rate_original", "rate_revised", "rate_gh"};
  CsvWriter csv(sink.stream(), header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({grid[i], curves[0].rates[i], curves[1].rates[i], curves[2].rates[i]});
  }
  if (flags.plot) write_plot(c, "Effect of the PNS estimate on the distilled key rate", PlotKind::Lines, header, err);
  return 0;
}

int run_montecarlo(const ScenarioConfig& c, const RunFlags& flags, Sink& sink) {
  const SimulationResult sim = simulate_link(c.link, c.sweep.pulses, c.sweep.seed, {.threads = flags.threads});
  const AnalyticComparison cmp = compare_with_analytic(sim, c.link);
  print_table(sink.stream(), {
                                 {"seed", std::to_string(sim.seed)},
                                 {"n_pulses", std::to_string(sim.n_pulses)},
                                 {"sifted_count", std::to_string(sim.sifted_count)},
                                 {"error_count", std::to_string(sim.error_count)},
                                 {"estimated_rate_bps", format_double(sim.estimated_rate)},
                                 {"estimated_qber", format_double(sim.estimated_qber)},
                                 {"analytic_rate_bps", format_double(cmp.analytic_rate)},
                                 {"analytic_qber", format_double(cmp.analytic_qber)},
                                 {"rate_sigma_bps", format_double(cmp.rate_sigma)},
                                 {"qber_sigma", format_double(cmp.qber_sigma)},
                                 {"rate_z", format_double(cmp.rate_z)},
                                 {"qber_z", format_double(cmp.qber_z)},
                                 {"analytic_in_95pct_interval", cmp.sifted_fraction_in_95 ? "yes" : "no"},
                             });
  return 0;
}

bool writes_csv(Command command) {
  return command == Command::SweepMu || command == Command::Surface || command == Command::OptimalMuCurve ||
         command == Command::CompareEstimates;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands) {
    if (n == name) return c;
  }
  return std::nullopt;
}

int run(Command command, const ScenarioConfig& config, const RunFlags& flags, std::ostream& out,
        std::ostream& err) {
  try {
    if (flags.plot && (!writes_csv(command) || config.output.path.empty())) {
      err << "error: --plot needs a CSV-producing command and --out PATH\n";
      return 2;
    }
    Sink sink(config.output.path, out);
    switch (command) {
      case Command::Rate: return run_rate(config, sink);
      case Command::SweepMu: return run_sweep_mu(config, flags, sink, err);
      case Command::Surface: return run_surface(config, flags, sink, err);
      case Command::OptimalMu: return run_optimal_mu(config, sink);
      case Command::OptimalMuCurve: return run_optimal_mu_curve(config, flags, sink, err);
      case Command::CompareEstimates: return run_compare(config, flags, sink, err);
      case Command::MonteCarlo: return run_montecarlo(config, flags, sink);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distilled key rate model for a fiber BB84 link", "qkdrate"};
  app.require_subcommand(1, 1);

  std::string config_path;
  RunFlags flags;
  std::vector<std::string> sets;
  // flag -> config key; values go through the config parser for validation
  const std::vector<std::pair<std::string, std::string>> mapped{
      {"--out", "out"},           {"--seed", "seed"},         {"--mu-min", "muMin"},
      {"--mu-max", "muMax"},      {"--mu-steps", "muSteps"},  {"--dist-min", "distMin"},
      {"--dist-max", "distMax"},  {"--dist-steps", "distSteps"}, {"--tol", "tol"},
      {"--confidence", "confidence"}, {"--pns", "pnsType"},   {"--entropy", "estType"},
      {"--pulses", "pulses"},
  };
  std::vector<std::string> mapped_values(mapped.size());

  app.add_option("--config", config_path, "Scenario file (key = value lines)");
  app.add_flag("--plot", flags.plot, "Also write a gnuplot script next to the CSV");
  app.add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  app.add_option("--set", sets, "Override any config key, KEY=VALUE (repeatable)");
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    app.add_option(mapped[i].first, mapped_values[i], "Overrides config key " + mapped[i].second);
  }
  for (const auto& [command, name] : kCommands) app.add_subcommand(std::string(name))->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  const auto chosen = app.get_subcommands();
  const Command command = *parse_command(chosen.front()->get_name());

  ScenarioConfig config = default_config();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        err << "error: cannot read config file '" << config_path << "'\n";
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      config = parse_config(text.str());
    }
    for (const std::string& s : sets) {
      if (s.find('=') == std::string::npos) {
        err << "error: --set expects KEY=VALUE, got '" << s << "'\n";
        return 2;
      }
      config = apply_config(config, s);
    }
  } catch (const ConfigError& e) {
    err << "error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << '\n';
    return 2;
  }
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (app.count(mapped[i].first) == 0) continue;
    try {
      config = apply_config(config, mapped[i].second + " = " + mapped_values[i]);
    } catch (const ConfigError& e) {
      err << "error: option " << mapped[i].first << ": " << e.what() << '\n';
      return 2;
    }
  }
  return run(command, config, flags, out, err);
}

}  // namespace qkd::cli
