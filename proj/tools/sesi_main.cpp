#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sesi/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symplectic integrators for N bodies on a sphere"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  bool quiet = false;
  bool no_timing = false;

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "JSON scenario file")->required();
    sub->add_option("--out", out, "output path (stdout when omitted)");
    sub->add_flag("--quiet", quiet, "suppress progress on stderr");
    sub->add_flag("--no-timing", no_timing, "omit wall-clock lines so output is reproducible");
    return sub;
  };
  auto* run = add("run", "integrate one scenario and write a trajectory CSV");
  auto* converge = add("converge", "step-size convergence study against a tau/2 reference");
  auto* compare = add("compare", "run several methods on one scenario (--out is a file prefix)");
  auto* oracle = add("oracle", "analytic benchmark trajectory and sesi4 closure check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sesi::cli::kConfigError;
  }

  sesi::cli::CommandOptions opts;
  if (!out.empty()) opts.out = out;
  opts.quiet = quiet;
  opts.timing = !no_timing;

  if (run->parsed()) return sesi::cli::cmd_run(config, opts);
  if (converge->parsed()) return sesi::cli::cmd_converge(config, opts);
  if (compare->parsed()) return sesi::cli::cmd_compare(config, opts);
  if (oracle->parsed()) return sesi::cli::cmd_oracle(config, opts);
  return sesi::cli::kConfigError;
}
