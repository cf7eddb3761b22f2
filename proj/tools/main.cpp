#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "l1geom/run.hpp"

namespace {

using l1geom::run::Command;

const std::map<Command, std::set<std::string>> kValueKeys = {
    {Command::threshold, {"delta", "C", "mode", "tol"}},
    {Command::curve, {"delta", "C", "mode"}},
    {Command::surface, {"delta", "C", "mode"}},
    {Command::exponents, {"delta", "rho", "C", "mode", "grid"}},
    {Command::angle, {"n", "m", "k", "C", "samples", "seed"}},
    {Command::mc_angle, {"n", "m", "k", "C", "trials", "seed"}},
    {Command::certify, {"n", "m", "k", "C", "seed", "source"}},
    {Command::simulate, {"delta", "rho", "C", "n", "trials", "tail", "seed"}},
    {Command::noisy, {"delta", "rho", "C", "n", "epsilon", "trials", "tail", "seed"}},
};

const std::map<Command, std::set<std::string>> kFlagKeys = {
    {Command::simulate, {"kappa"}},
    {Command::noisy, {"relative"}},
};

const std::map<Command, std::string> kDescriptions = {
    {Command::threshold, "critical sparsity fraction at one (delta, C, mode)"},
    {Command::curve, "threshold sweep over C at fixed delta"},
    {Command::surface, "threshold sweep over a delta x C grid"},
    {Command::exponents, "net-exponent breakdown over the nu grid"},
    {Command::angle, "face-sum complementary Grassmann angle"},
    {Command::mc_angle, "subspace-sampling estimate of the Grassmann angle"},
    {Command::certify, "exact balancedness certificate for a sampled ensemble"},
    {Command::simulate, "noiseless recovery trials against the l1 error bound"},
    {Command::noisy, "noisy recovery trials against the augmented bound"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold calculator and recovery laboratory for l1-minimization geometry"};
  app.require_subcommand(0, 1);

  l1geom::run::RunConfig config;
  std::string format = "auto";
  app.add_option("-o,--output", config.output_path, "write the payload to this file");
  app.add_option("-f,--format", format, "output format")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("-j,--jobs", config.jobs, "parallel worker count")
      ->envname("L1GEOM_JOBS")
      ->check(CLI::PositiveNumber);

  std::map<Command, std::map<std::string, std::string>> values;
  std::map<Command, std::map<std::string, bool>> flags;
  std::map<Command, CLI::App*> subs;
  for (const auto& [command, keys] : kValueKeys) {
    CLI::App* sub = app.add_subcommand(l1geom::run::to_string(command), kDescriptions.at(command));
    sub->fallthrough();  // lets -o/-f/-j appear after the command name
    subs[command] = sub;
    for (const std::string& key : keys) sub->add_option("--" + key, values[command][key]);
    if (const auto it = kFlagKeys.find(command); it != kFlagKeys.end())
      for (const std::string& key : it->second) sub->add_flag("--" + key, flags[command][key]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << l1geom::run::usage_text();
    return 2;
  }

  Command chosen{};
  bool has_command = false;
  for (const auto& [command, sub] : subs)
    if (sub->parsed()) {
      chosen = command;
      has_command = true;
    }
  if (!has_command) {
    std::cerr << "no command given\n\n" << l1geom::run::usage_text();
    return 2;
  }

  config.command = chosen;
  if (format == "csv") config.format = l1geom::run::OutputFormat::csv;
  if (format == "json") config.format = l1geom::run::OutputFormat::json;
  CLI::App* sub = subs.at(chosen);
  for (const auto& [key, value] : values[chosen])
    if (sub->count("--" + key) > 0) config.parameters[key] = value;
  for (const auto& [key, set] : flags[chosen])
    if (set) config.parameters[key] = "1";

  const auto result = l1geom::run::run(config);
  if (result.exit_code != 0) {
    std::cerr << "error: " << result.error << "\n";
    if (result.exit_code == 2) std::cerr << "\n" << l1geom::run::usage_text();
    return result.exit_code;
  }
  if (config.output_path.empty()) std::cout << result.output;
  return 0;
}
