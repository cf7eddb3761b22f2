#pragma once

#include <map>
#include <string>
#include <vector>

namespace l1geom::run {

enum class Command {
  threshold,  // critical sparsity at one (delta, C, mode)
  curve,      // sweep C at fixed delta
  surface,    // sweep delta x C
  exponents,  // net-exponent breakdown over nu
  angle,      // face-sum complementary Grassmann angle
  mc_angle,   // subspace-sampling estimate of the same angle
  certify,    // exact balancedness certificate for a sampled ensemble
  simulate,   // noiseless recovery trials vs the l1 error bound
  noisy,      // noisy recovery trials vs the augmented bound
};

std::string to_string(Command command);
Command command_from_string(const std::string& name);  // throws std::invalid_argument

enum class OutputFormat {
  auto_detect,  // json for scalar reports, csv for row streams
  csv,
  json,
};

struct RunConfig {
  Command command = Command::threshold;
  std::map<std::string, std::string> parameters;  // flag values, unparsed
  std::string output_path;                        // empty = return-only
  OutputFormat format = OutputFormat::auto_detect;
  int jobs = 1;
};

struct RunResult {
  int exit_code = 0;   // 0 ok, 2 parameter error, 3 numerical failure
  std::string output;  // serialized payload (also written to output_path)
  std::string error;   // diagnostic when exit_code != 0
};

/* Validates parameters, dispatches to the owning module, and serializes the
 * result.  Never throws: failures are encoded in exit_code/error.  Output is
 * byte-identical for identical config + seed, independent of jobs. */
RunResult run(const RunConfig& config);

// one-line usage summary per command (shown on parameter errors)
std::string usage_text();

// "start:stop:count" with inclusive endpoints, or a bare scalar
std::vector<double> parse_grid(const std::string& text);

}  // namespace l1geom::run
