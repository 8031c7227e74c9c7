// Command-line experiment runner for the refined-scale laboratory.
//
//   lab run <config>    execute a verification suite from a config file
//   lab list            show the registered suites and what they exercise
//   lab check <report>  re-validate a written report against its bounds
//
// The report directory defaults to the working directory; --out-dir or the
// LAB_OUT_DIR environment variable override it. Exit status 0 means every
// row passed.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rscale/lab.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("LAB_OUT_DIR"); env && *env) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"refined-scale verification lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_flag;
  CLI::App* run = app.add_subcommand("run", "run a verification suite");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--out-dir", out_dir_flag, "report output directory");

  CLI::App* list = app.add_subcommand("list", "list the registered suites");

  std::string report_path;
  CLI::App* check = app.add_subcommand("check", "re-validate a written report");
  check->add_option("report", report_path, "report csv produced by 'lab run'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const rscale::lab::ExperimentConfig config =
          rscale::lab::ExperimentConfig::load(config_path);
      return rscale::lab::run_suite_to_files(config, resolve_out_dir(out_dir_flag), std::cout);
    }
    if (list->parsed()) {
      const auto& registry = rscale::lab::suite_registry();
      for (const auto& info : registry) std::cout << info.name << " -> " << info.anchor << "\n";
      std::cout << registry.size() << " suites\n";
      return 0;
    }
    if (check->parsed()) return rscale::lab::check_report(report_path, std::cout);
  } catch (const std::exception& err) {
    std::cerr << "lab: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
