// qcka: analyze catalog or file scenarios, scan a parameter, simulate the
// repeat-code protocol.
//
// Exit status: 0 success, 2 usage error, 3 validation error, 4 numeric failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qcka/catalog.hpp"
#include "qcka/keyproto.hpp"
#include "qcka/report.hpp"
#include "qcka/scenario_io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;

struct ScenarioFlags {
  std::string scenario;
  std::string file;
  std::map<std::string, double> values;  // only flags that were given
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, bool with_file) {
  cmd->add_option("--scenario", f.scenario, "Catalog scenario: example1, example2, example3, werner, example5, example6, example7");
  if (with_file) cmd->add_option("--file", f.file, "Scenario file (JSON)");
  for (const char* name : {"D", "a", "alpha", "lambda", "deltaX", "deltaY"}) {
    cmd->add_option_function<double>(std::string("--") + name, [&f, name](double v) { f.values[name] = v; },
                                     std::string("Scenario parameter ") + name);
  }
}

qcka::Scenario resolve_scenario(const ScenarioFlags& f) {
  if (!f.file.empty()) {
    if (!f.scenario.empty() || !f.values.empty())
      throw CLI::ValidationError("--file", "cannot be combined with --scenario or scenario parameters");
    return qcka::load_scenario(f.file);
  }
  if (f.scenario.empty()) throw CLI::RequiredError("--scenario or --file");
  return qcka::make_scenario(f.scenario, f.values);
}

// Writes to `path` via a temporary file and rename, or to stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw qcka::ValidationError("cannot write output file '" + path + "'");
    out << text;
    if (!out.flush()) throw qcka::ValidationError("cannot write output file '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw qcka::ValidationError("cannot write output file '" + path + "'");
  }
}

std::string render(const qcka::ReportRecord& r, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    os << qcka::csv_header() << '\n' << qcka::csv_row(r) << '\n';
  } else if (format == "json-record") {
    os << qcka::to_json(r).dump() << '\n';
  } else {
    qcka::write_table(os, r);
  }
  return os.str();
}

std::string format_z(double empirical, double reference, double se) {
  if (se == 0.0) return empirical == reference ? "0" : (empirical > reference ? "inf" : "-inf");
  return qcka::format_number((empirical - reference) / se);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical key agreement and quantum entanglement toolkit"};
  app.require_subcommand(1);

  ScenarioFlags analyze_flags;
  qcka::AnalyzeOptions analyze_opts;
  std::string out_path, format = "table";
  std::size_t nzbar = 0;
  std::uint64_t seed = 1;
  int restarts = 8;
  std::string eve_frame = "standard";
  bool with_mu = false;

  auto add_analysis_flags = [&](CLI::App* cmd) {
    cmd->add_option("--eve-frame", eve_frame, "Eve measurement frame")->check(CLI::IsMember({"standard", "rotated"}));
    cmd->add_option("--restarts", restarts, "Random restarts of the intrinsic-information search")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--nzbar", nzbar, "Output alphabet size of Eve's channel (default |Z|)");
    cmd->add_flag("--mu", with_mu, "Also estimate the entanglement measure mu");
    cmd->add_option("--out", out_path, "Output file (default stdout)");
  };

  auto* analyze = app.add_subcommand("analyze", "Report information and separability diagnostics for one scenario");
  add_scenario_flags(analyze, analyze_flags, true);
  add_analysis_flags(analyze);
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json-record"}));

  ScenarioFlags scan_flags;
  std::string scan_param;
  double from = 0.0, to = 0.0, step = 0.0;
  auto* scan = app.add_subcommand("scan", "CSV rows of the analysis over a parameter grid");
  add_scenario_flags(scan, scan_flags, false);
  add_analysis_flags(scan);
  scan->add_option("--param", scan_param, "Parameter to vary")->required();
  scan->add_option("--from", from, "First grid value")->required();
  scan->add_option("--to", to, "Last grid value")->required();
  scan->add_option("--step", step, "Grid step")->required();

  double sim_D = 0.0;
  std::optional<double> sim_delta;
  unsigned sim_N = 2;
  std::uint64_t sim_trials = 100000;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the repeat-code protocol against its closed forms");
  simulate->add_option("--D", sim_D, "Disturbance")->required();
  simulate->add_option("--delta", sim_delta, "Eve's per-bit success probability (default 1/2 + sqrt(D(1-D)))");
  simulate->add_option("--N", sim_N, "Block length (even)")->required();
  simulate->add_option("--trials", sim_trials, "Number of blocks");
  simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--out", out_path, "Output file (default stdout)");

  ScenarioFlags export_flags;
  auto* exporter = app.add_subcommand("export", "Write a scenario in the inline file format");
  add_scenario_flags(exporter, export_flags, true);
  exporter->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  analyze_opts.eve_frame = eve_frame;
  analyze_opts.nzbar = nzbar;
  analyze_opts.restarts = restarts;
  analyze_opts.seed = seed;
  analyze_opts.mu = with_mu;

  try {
    if (*analyze) {
      const qcka::Scenario s = resolve_scenario(analyze_flags);
      emit(out_path, render(qcka::analyze(s, analyze_opts), format));
    } else if (*scan) {
      if (scan_flags.scenario.empty()) throw CLI::RequiredError("--scenario");
      if (!(step > 0.0) || !(to >= from) || !std::isfinite(from) || !std::isfinite(to))
        throw qcka::ValidationError("scan: empty range (need step > 0 and to >= from)");
      const auto points = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
      std::ostringstream os;
      os << qcka::csv_header() << '\n';
      for (long i = 0; i < points; ++i) {
        auto params = scan_flags.values;
        params[scan_param] = from + static_cast<double>(i) * step;
        os << qcka::csv_row(qcka::analyze(qcka::make_scenario(scan_flags.scenario, params), analyze_opts)) << '\n';
      }
      emit(out_path, os.str());
    } else if (*simulate) {
      const double delta = sim_delta.value_or(qcka::example1_delta(sim_D));
      const auto an = qcka::repeat_code_analytic(sim_D, delta, sim_N);
      const auto r = qcka::repeat_code_simulate(sim_D, delta, sim_N, sim_trials, seed);
      using qcka::format_number;
      std::ostringstream os;
      os << "D                     " << format_number(sim_D) << '\n'
         << "delta                 " << format_number(delta) << '\n'
         << "N                     " << sim_N << '\n'
         << "trials                " << r.trials << '\n'
         << "seed                  " << r.seed << '\n'
         << "accepted              " << r.accepted << '\n'
         << "p_accept              " << format_number(an.p_accept) << '\n'
         << "bob_error_rate        " << format_number(r.bob_error_rate) << " +- " << format_number(r.bob_standard_error) << '\n'
         << "beta_N                " << format_number(an.beta_N) << '\n'
         << "bob_z                 " << format_z(r.bob_error_rate, an.beta_N, r.bob_standard_error) << '\n'
         << "eve_error_rate        " << format_number(r.eve_error_rate) << " +- " << format_number(r.eve_standard_error) << '\n'
         << "gamma_N_lower         " << format_number(an.gamma_N_lower) << '\n'
         << "eve_z_vs_lower_bound  " << format_z(r.eve_error_rate, an.gamma_N_lower, r.eve_standard_error) << '\n'
         << "advantage_condition   " << (qcka::advantage_condition(sim_D, delta) ? "true" : "false") << '\n';
      emit(out_path, os.str());
    } else if (*exporter) {
      emit(out_path, qcka::export_scenario(resolve_scenario(export_flags)).dump(2) + "\n");
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qcka::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const qcka::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
