// Command-line front end: classical, snapshot, series, verify, oracle-compare.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "paultrap.hpp"

namespace {

struct Options {
  std::optional<std::string> preset;
  std::optional<std::string> config_file;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> n;
  std::optional<double> b0;
  std::optional<double> declared_c0;
  std::optional<int> iterations;
  std::optional<double> rk4_step;
  std::optional<std::size_t> grid_points;
  std::optional<std::string> times;
  std::optional<std::string> t_end;
  bool skip_pde = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--preset", o.preset, "fig1-rho | fig2-soliton | fig3-collapse | static");
  cmd->add_option("--config", o.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output file (default: standard output)");
  cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--n", o.n, "quantum number of the train");
  cmd->add_option("--b0", o.b0, "free constant b0");
  cmd->add_option("--declared-c0", o.declared_c0, "rescale b0 so the center orbit matches this c0");
  cmd->add_option("--iterations", o.iterations, "use the Picard solver with this many iterations");
  cmd->add_option("--rk4-step", o.rk4_step, "classical time step");
  cmd->add_option("--grid-points", o.grid_points, "space grid point count (power of two)");
  cmd->add_option("--times", o.times, "snapshot times, e.g. 0,0.5pi,2pi");
  cmd->add_option("--t-end", o.t_end, "end of the run, e.g. 4pi");
}

paultrap::RunConfig resolve(const Options& o) {
  using namespace paultrap;
  RunConfig c = preset(o.preset.value_or("fig2-soliton"));
  if (o.config_file) {
    std::ifstream in(*o.config_file);
    if (!in) throw Error(Errc::ConfigError, "cannot read " + *o.config_file);
    std::stringstream text;
    text << in.rdbuf();
    c = parse_config(text.str(), c);
  }
  if (o.n) c.n = *o.n;
  if (o.b0) c.b0 = *o.b0;
  if (o.declared_c0) c.declared_c0 = *o.declared_c0;
  if (o.iterations) {
    c.solver.method = SolverMethod::Picard;
    c.solver.iterations = *o.iterations;
  }
  if (o.rk4_step) c.solver.rk4_step = *o.rk4_step;
  if (o.grid_points) c.space.points = *o.grid_points;
  if (o.t_end) c.time.t_end = parse_time(*o.t_end);
  if (o.times) c.times = parse_times(*o.times);
  if (o.format) c.output.format = *o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (o.out) c.output.path = *o.out;
  validate(c);
  return c;
}

template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw paultrap::Error(paultrap::Errc::ConfigError, "cannot write " + path);
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact wave-packet trains in a Paul trap and their numerical oracles"};
  app.set_version_flag("--version", std::string(paultrap::kVersion));
  app.require_subcommand(1);
  Options o;
  CLI::App* classical = app.add_subcommand("classical", "classical solution and polar form");
  CLI::App* snapshot = app.add_subcommand("snapshot", "wavefunction on the space grid at given times");
  CLI::App* series = app.add_subcommand("series", "center orbit, width and mean energy over time");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite and write a JSON report");
  CLI::App* compare = app.add_subcommand("oracle-compare", "Picard and split-step convergence tables");
  for (auto* cmd : {classical, snapshot, series, verify, compare}) add_common(cmd, o);
  verify->add_flag("--skip-pde", o.skip_pde, "omit the split-step comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::optional<paultrap::RunContext> ctx;
  try {
    ctx.emplace(paultrap::prepare(resolve(o)));
  } catch (const paultrap::Error& e) {
    std::cerr << "paultrap: " << e.what() << '\n';
    return 2;
  }
  if (auto w = ctx->track.params().stability_warning()) std::cerr << "paultrap: warning: " << *w << '\n';
  const auto& cfg = ctx->config;

  try {
    if (verify->parsed()) {
      const auto report = paultrap::run_verify(*ctx, !o.skip_pde);
      emit(cfg.output.path, [&](std::ostream& os) { os << report.to_json().dump(1) << '\n'; });
      for (const auto& c : report.checks) {
        if (!c.passed) std::cerr << "paultrap: FAILED " << c.name << ": " << c.detail << '\n';
      }
      return report.passed() ? 0 : 1;
    }
    paultrap::Document doc;
    if (classical->parsed()) doc = paultrap::run_classical(*ctx);
    if (snapshot->parsed()) doc = paultrap::run_snapshot(*ctx);
    if (series->parsed()) doc = paultrap::run_series(*ctx);
    if (compare->parsed()) doc = paultrap::run_oracle_compare(*ctx);
    emit(cfg.output.path, [&](std::ostream& os) { paultrap::write_document(os, doc, cfg.output.format); });
  } catch (const paultrap::Error& e) {
    std::cerr << "paultrap: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
