#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "uukin/config.hpp"
#include "uukin/parallel.hpp"
#include "uukin/run.hpp"

namespace {

struct Args {
  std::string config;
  std::string index;
  std::vector<std::string> sets;
  std::string output;
  bool resume = false;
  bool quiet = false;
  std::size_t threads = 0;
};

int finish(const uukin::RunRecord& rec, bool quiet) {
  if (!quiet) std::cout << rec.to_json();
  if (rec.exit_code != uukin::kExitOk) std::cerr << "uukin: " << rec.error << "\n";
  return rec.exit_code;
}

int run_command(const Args& a, const char* forced) {
  std::vector<std::string> overrides = a.sets;
  if (forced) overrides.push_back(std::string("scenario=") + forced);
  if (!a.output.empty()) overrides.push_back("output.dir=" + a.output);
  uukin::RunConfig cfg;
  try {
    cfg = uukin::load_config(a.config, overrides);
  } catch (const uukin::ConfigError& e) {
    for (const auto& is : e.issues()) {
      std::cerr << a.config << ":";
      if (is.line > 0) std::cerr << is.line << ":";
      std::cerr << " " << is.key << ": " << is.reason << "\n";
    }
    return uukin::kExitDomain;
  } catch (const uukin::Error& e) {
    std::cerr << "uukin: " << e.what() << "\n";
    return uukin::exit_code_for(e.kind());
  }
  uukin::RunOptions opts;
  opts.resume = a.resume;
  opts.log = &std::cerr;
  return finish(uukin::run(cfg, opts), a.quiet);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic solvers for the Bose gas near condensation onset"};
  app.set_version_flag("--version", uukin::library_version());
  app.require_subcommand(1);
  Args a;
  app.add_option("--threads", a.threads, "worker threads (default: UUKIN_THREADS or hardware)");

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", a.config, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", a.sets, "override, key=value (repeatable)");
    sub->add_option("-o,--output", a.output, "output directory (overrides output.dir)");
    sub->add_flag("-q,--quiet", a.quiet, "do not print the run record");
  };
  CLI::App* run = app.add_subcommand("run", "run the scenario named in the config");
  common(run);
  run->add_flag("--resume", a.resume, "continue from the checkpoint in the output directory");
  CLI::App* validate = app.add_subcommand("validate", "operator self-checks against the oracle");
  common(validate);
  CLI::App* scales = app.add_subcommand("scales", "boundary-layer scale and exponent report");
  common(scales);
  CLI::App* fit = app.add_subcommand("fit", "blow-up time and exponents from a trajectory index");
  fit->add_option("index", a.index, "index.csv of a uu run")->required()->check(CLI::ExistingFile);
  fit->add_flag("-q,--quiet", a.quiet, "do not print the record");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : uukin::kExitDomain;
  }
  if (a.threads > 0) uukin::set_worker_count(a.threads);

  if (*run) return run_command(a, nullptr);
  if (*validate) return run_command(a, "validate");
  if (*scales) return run_command(a, "scales");
  return finish(uukin::fit_from_index(a.index), a.quiet);
}
