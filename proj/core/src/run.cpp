#include "l1geom/run.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "l1geom/exponents.hpp"
#include "l1geom/parallel.hpp"
#include "l1geom/polytope_geometry.hpp"
#include "l1geom/recovery_lab.hpp"
#include "l1geom/thresholds.hpp"

namespace l1geom::run {

namespace {

using nlohmann::json;
using exponents::RobustnessMode;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// json encodes non-finite numbers as null; keep them readable instead
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double parse_double(const std::string& text, const std::string& flag) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument("--" + flag + ": expected a number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text, const std::string& flag) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument("--" + flag + ": expected an integer, got '" + text + "'");
  return v;
}

class Params {
 public:
  Params(const std::map<std::string, std::string>& map, std::set<std::string> allowed)
      : map_(map) {
    for (const auto& [key, value] : map_)
      if (!allowed.count(key)) throw std::invalid_argument("unknown parameter --" + key);
  }

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  std::string require(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw std::invalid_argument("missing required parameter --" + key);
    return it->second;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second;
  }

  double number(const std::string& key) const { return parse_double(require(key), key); }
  double number(const std::string& key, double fallback) const {
    return has(key) ? parse_double(require(key), key) : fallback;
  }

  long long integer(const std::string& key) const { return parse_integer(require(key), key); }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? parse_integer(require(key), key) : fallback;
  }

  std::uint64_t seed(std::uint64_t fallback = 1) const {
    if (!has(key_seed_)) return fallback;
    const std::string text = require(key_seed_);
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
      throw std::invalid_argument("--seed: expected an unsigned integer, got '" + text + "'");
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = require(key);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("--" + key + ": expected a boolean, got '" + v + "'");
  }

 private:
  const std::map<std::string, std::string>& map_;
  std::string key_seed_ = "seed";
};

RobustnessMode mode_param(const Params& p) {
  return exponents::mode_from_string(p.text("mode", "strong"));
}

std::string status_text(thresholds::BracketStatus status) {
  switch (status) {
    case thresholds::BracketStatus::bracketed: return "bracketed";
    case thresholds::BracketStatus::degenerate_zero: return "degenerate_zero";
    case thresholds::BracketStatus::capped_upper: return "capped_upper";
  }
  return "unknown";
}

std::string method_text(polytope_geometry::AngleMethod method) {
  switch (method) {
    case polytope_geometry::AngleMethod::closed_form: return "closed_form";
    case polytope_geometry::AngleMethod::quadrature: return "quadrature";
    case polytope_geometry::AngleMethod::mc_density: return "mc_density";
    case polytope_geometry::AngleMethod::mc_subspace: return "mc_subspace";
  }
  return "unknown";
}

class CsvBuilder {
 public:
  void comment(const std::string& line) { out_ << "# " << line << '\n'; }
  void header(const std::vector<std::string>& names) { line(names); }
  void row(const std::vector<std::string>& cells) { line(cells); }
  std::string str() const { return out_.str(); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::ostringstream out_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json threshold_json(const thresholds::ThresholdResult& r) {
  json j;
  j["mode"] = exponents::to_string(r.mode);
  j["delta"] = json_number(r.delta);
  j["C"] = json_number(r.c_factor);
  j["rho"] = json_number(r.rho_star);
  j["zeta"] = json_number(r.zeta);
  j["nu_argmax"] = json_number(r.nu_argmax);
  j["tol"] = json_number(r.tol);
  j["iterations"] = r.iterations;
  j["status"] = status_text(r.status);
  j["cert_below"] = json_number(r.cert_below);
  j["cert_above"] = json_number(r.cert_above);
  return j;
}

std::vector<std::string> threshold_csv_row(const thresholds::ThresholdResult& r) {
  return {exponents::to_string(r.mode), format_double(r.delta),     format_double(r.c_factor),
          format_double(r.rho_star),    format_double(r.zeta),      format_double(r.nu_argmax)};
}

std::string cmd_threshold(const Params& p, OutputFormat format) {
  const auto result = thresholds::critical_rho(p.number("delta"), p.number("C"), mode_param(p),
                                               p.number("tol", 1e-5));
  if (format == OutputFormat::csv) {
    CsvBuilder csv;
    csv.header({"mode", "delta", "C", "rho", "zeta", "nu_argmax", "tol", "status"});
    auto row = threshold_csv_row(result);
    row.push_back(format_double(result.tol));
    row.push_back(status_text(result.status));
    csv.row(row);
    return csv.str();
  }
  json j = threshold_json(result);
  j["command"] = "threshold";
  return dump(j);
}

std::string cmd_curve(const Params& p, OutputFormat format, int jobs) {
  const double delta = p.number("delta");
  const auto c_grid = parse_grid(p.require("C"));
  const auto results = thresholds::threshold_curve(delta, c_grid, mode_param(p), jobs);
  if (format == OutputFormat::json) {
    json rows = json::array();
    for (const auto& r : results) {
      json row = threshold_json(r);
      rows.push_back(std::move(row));
    }
    json j;
    j["command"] = "curve";
    j["rows"] = std::move(rows);
    return dump(j);
  }
  CsvBuilder csv;
  csv.header({"mode", "delta", "C", "rho", "zeta", "nu_argmax"});
  for (const auto& r : results) csv.row(threshold_csv_row(r));
  return csv.str();
}

std::string cmd_surface(const Params& p, OutputFormat format, int jobs) {
  const auto deltas = parse_grid(p.require("delta"));
  const auto c_grid = parse_grid(p.require("C"));
  const auto mode = mode_param(p);
  std::vector<thresholds::ThresholdResult> results(deltas.size() * c_grid.size());
  parallel_for_index(results.size(), jobs, [&](std::size_t i) {
    const double delta = deltas[i / c_grid.size()];
    const double c_factor = c_grid[i % c_grid.size()];
    results[i] = thresholds::critical_rho(delta, c_factor, mode);
  });
  if (format == OutputFormat::json) {
    json rows = json::array();
    for (const auto& r : results) rows.push_back(threshold_json(r));
    json j;
    j["command"] = "surface";
    j["rows"] = std::move(rows);
    return dump(j);
  }
  CsvBuilder csv;
  csv.header({"mode", "delta", "C", "rho", "zeta", "nu_argmax"});
  for (const auto& r : results) csv.row(threshold_csv_row(r));
  return csv.str();
}

std::string cmd_exponents(const Params& p, OutputFormat format, int jobs) {
  exponents::NetExponentParams params;
  params.delta = p.number("delta");
  params.rho = p.number("rho");
  params.c_factor = p.number("C");
  params.mode = mode_param(p);
  const int grid = static_cast<int>(p.integer("grid", 201));
  const auto rows = exponents::exponent_breakdown_series(params, grid, jobs);
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      json row;
      row["nu"] = json_number(r.nu);
      row["nu_prime"] = json_number(r.nu_prime);
      row["gamma_prime"] = json_number(r.gamma_prime);
      row["x_nu"] = json_number(r.x_nu);
      row["y_gamma"] = json_number(r.y_gamma);
      row["psi_com"] = json_number(r.psi_com);
      row["psi_int"] = json_number(r.psi_int);
      row["psi_ext"] = json_number(r.psi_ext);
      row["psi_net"] = json_number(r.psi_net);
      arr.push_back(std::move(row));
    }
    json j;
    j["command"] = "exponents";
    j["mode"] = exponents::to_string(params.mode);
    j["delta"] = json_number(params.delta);
    j["rho"] = json_number(params.rho);
    j["C"] = json_number(params.c_factor);
    j["rows"] = std::move(arr);
    return dump(j);
  }
  CsvBuilder csv;
  csv.header({"nu", "psi_com", "psi_int", "psi_ext", "psi_net"});
  for (const auto& r : rows)
    csv.row({format_double(r.nu), format_double(r.psi_com), format_double(r.psi_int),
             format_double(r.psi_ext), format_double(r.psi_net)});
  return csv.str();
}

std::string cmd_angle(const Params& p, OutputFormat format) {
  const int n = static_cast<int>(p.integer("n"));
  const int m = static_cast<int>(p.integer("m"));
  const int k = static_cast<int>(p.integer("k"));
  const double c_factor = p.number("C", 1.0);
  const long samples = p.integer("samples", 1000000);
  const std::uint64_t seed = p.seed();
  const auto est = polytope_geometry::complementary_grassmann_angle(n, m, k, c_factor, samples, seed);
  if (format == OutputFormat::csv) {
    CsvBuilder csv;
    csv.comment("seed=" + std::to_string(seed));
    csv.header({"value", "stderr", "samples", "seed"});
    csv.row({format_double(est.value), format_double(est.stderr_est),
             std::to_string(est.samples_or_nodes), std::to_string(seed)});
    return csv.str();
  }
  json j;
  j["command"] = "angle";
  j["n"] = n;
  j["m"] = m;
  j["k"] = k;
  j["C"] = json_number(c_factor);
  j["samples"] = samples;
  j["seed"] = seed;
  j["value"] = json_number(est.value);
  j["stderr"] = json_number(est.stderr_est);
  j["method"] = method_text(est.method);
  j["nodes"] = est.samples_or_nodes;
  return dump(j);
}

std::string cmd_mc_angle(const Params& p, OutputFormat format, int jobs) {
  const int n = static_cast<int>(p.integer("n"));
  const int m = static_cast<int>(p.integer("m"));
  const int k = static_cast<int>(p.integer("k"));
  const double c_factor = p.number("C", 1.0);
  const long trials = p.integer("trials", 100000);
  const std::uint64_t seed = p.seed();
  const auto est =
      polytope_geometry::grassmann_angle_monte_carlo(n, m, k, c_factor, trials, seed, jobs);
  if (format == OutputFormat::json) {
    json j;
    j["command"] = "mc-angle";
    j["n"] = n;
    j["m"] = m;
    j["k"] = k;
    j["C"] = json_number(c_factor);
    j["trials"] = trials;
    j["used_trials"] = est.samples_or_nodes;
    j["seed"] = seed;
    j["value"] = json_number(est.value);
    j["stderr"] = json_number(est.stderr_est);
    return dump(j);
  }
  CsvBuilder csv;
  csv.header({"value", "stderr", "trials", "seed"});
  csv.row({format_double(est.value), format_double(est.stderr_est), std::to_string(trials),
           std::to_string(seed)});
  return csv.str();
}

std::string cmd_certify(const Params& p, OutputFormat format) {
  const int n = static_cast<int>(p.integer("n"));
  const int m = static_cast<int>(p.integer("m"));
  const int k = static_cast<int>(p.integer("k"));
  const double c_factor = p.number("C", 1.0);
  const std::uint64_t seed = p.seed();
  const std::string source = p.text("source", "matrix");

  recovery_lab::NullSpaceBasis basis;
  if (source == "matrix") {
    basis = recovery_lab::null_space_basis(recovery_lab::sample_ensemble(m, n, seed));
  } else if (source == "gaussian") {
    basis = recovery_lab::direct_gaussian_basis(n, m, seed);
  } else {
    throw std::invalid_argument("--source: expected 'matrix' or 'gaussian', got '" + source + "'");
  }
  const auto cert = recovery_lab::certify_balancedness(basis, k, c_factor);

  if (format == OutputFormat::csv) {
    CsvBuilder csv;
    csv.comment("seed=" + std::to_string(seed));
    csv.header({"n", "m", "k", "C", "worst_ratio", "holds", "worst_support"});
    std::string support;
    for (std::size_t i = 0; i < cert.worst_support.size(); ++i) {
      if (i) support += ';';
      support += std::to_string(cert.worst_support[i]);
    }
    csv.row({std::to_string(n), std::to_string(m), std::to_string(k), format_double(c_factor),
             format_double(cert.worst_ratio), cert.holds ? "1" : "0", support});
    return csv.str();
  }
  json j;
  j["command"] = "certify";
  j["n"] = n;
  j["m"] = m;
  j["k"] = k;
  j["C"] = json_number(c_factor);
  j["seed"] = seed;
  j["source"] = source;
  j["worst_ratio"] = json_number(cert.worst_ratio);
  j["worst_support"] = cert.worst_support;
  j["holds"] = cert.holds;
  return dump(j);
}

std::string cmd_simulate(const Params& p, OutputFormat format, int jobs) {
  const double delta = p.number("delta");
  const double rho = p.number("rho");
  const double c_factor = p.number("C");
  const int n = static_cast<int>(p.integer("n"));
  const long trials = p.integer("trials", 100);
  const double tail = p.number("tail", 0.0);
  const std::uint64_t seed = p.seed();
  const bool kappa = p.flag("kappa", false);
  const auto reports =
      recovery_lab::recovery_experiment(delta, rho, c_factor, n, trials, tail, seed, jobs, kappa);

  long satisfied = 0;
  for (const auto& r : reports) satisfied += r.satisfied ? 1 : 0;

  if (format == OutputFormat::json) {
    json arr = json::array();
    for (std::size_t t = 0; t < reports.size(); ++t) {
      const auto& r = reports[t];
      json row;
      row["trial"] = t;
      row["err_l1"] = json_number(r.err_l1);
      row["err_tail_l1"] = json_number(r.err_tail_l1);
      row["bound"] = json_number(r.bound);
      row["satisfied"] = r.satisfied;
      if (kappa) row["kappa"] = json_number(r.kappa);
      arr.push_back(std::move(row));
    }
    json j;
    j["command"] = "simulate";
    j["delta"] = json_number(delta);
    j["rho"] = json_number(rho);
    j["C"] = json_number(c_factor);
    j["n"] = n;
    j["tail"] = json_number(tail);
    j["seed"] = seed;
    j["satisfied_rate"] = json_number(static_cast<double>(satisfied) / reports.size());
    j["trials"] = std::move(arr);
    return dump(j);
  }
  CsvBuilder csv;
  csv.comment("seed=" + std::to_string(seed));
  std::vector<std::string> header = {"trial", "err_l1", "err_tail_l1", "bound", "satisfied"};
  if (kappa) header.push_back("kappa");
  csv.header(header);
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    std::vector<std::string> row = {std::to_string(t), format_double(r.err_l1),
                                    format_double(r.err_tail_l1), format_double(r.bound),
                                    r.satisfied ? "1" : "0"};
    if (kappa) row.push_back(format_double(r.kappa));
    csv.row(row);
  }
  return csv.str();
}

std::string cmd_noisy(const Params& p, OutputFormat format, int jobs) {
  const double delta = p.number("delta");
  const double rho = p.number("rho");
  const double c_factor = p.number("C");
  const int n = static_cast<int>(p.integer("n"));
  const double epsilon = p.number("epsilon");
  const long trials = p.integer("trials", 100);
  const double tail = p.number("tail", 0.0);
  const bool relative = p.flag("relative", false);
  const std::uint64_t seed = p.seed();
  const auto reports = recovery_lab::noisy_experiment(delta, rho, c_factor, n, epsilon, trials,
                                                      seed, jobs, tail, relative);

  long satisfied = 0;
  for (const auto& r : reports) satisfied += r.satisfied ? 1 : 0;

  if (format == OutputFormat::json) {
    json arr = json::array();
    for (std::size_t t = 0; t < reports.size(); ++t) {
      const auto& r = reports[t];
      json row;
      row["trial"] = t;
      row["epsilon"] = json_number(r.epsilon);
      row["sigma_min"] = json_number(r.sigma_min);
      row["err_l1"] = json_number(r.err_l1);
      row["bound"] = json_number(r.bound);
      row["satisfied"] = r.satisfied;
      arr.push_back(std::move(row));
    }
    json j;
    j["command"] = "noisy";
    j["delta"] = json_number(delta);
    j["rho"] = json_number(rho);
    j["C"] = json_number(c_factor);
    j["n"] = n;
    j["epsilon"] = json_number(epsilon);
    j["relative"] = relative;
    j["tail"] = json_number(tail);
    j["seed"] = seed;
    j["satisfied_rate"] = json_number(static_cast<double>(satisfied) / reports.size());
    j["trials"] = std::move(arr);
    return dump(j);
  }
  CsvBuilder csv;
  csv.comment("seed=" + std::to_string(seed));
  csv.header({"trial", "epsilon", "sigma_min", "err_l1", "bound", "satisfied"});
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    csv.row({std::to_string(t), format_double(r.epsilon), format_double(r.sigma_min),
             format_double(r.err_l1), format_double(r.bound), r.satisfied ? "1" : "0"});
  }
  return csv.str();
}

OutputFormat resolve_format(OutputFormat requested, Command command) {
  if (requested != OutputFormat::auto_detect) return requested;
  switch (command) {
    case Command::threshold:
    case Command::angle:
    case Command::certify:
      return OutputFormat::json;
    default:
      return OutputFormat::csv;
  }
}

std::set<std::string> allowed_keys(Command command) {
  switch (command) {
    case Command::threshold: return {"delta", "C", "mode", "tol"};
    case Command::curve: return {"delta", "C", "mode"};
    case Command::surface: return {"delta", "C", "mode"};
    case Command::exponents: return {"delta", "rho", "C", "mode", "grid"};
    case Command::angle: return {"n", "m", "k", "C", "samples", "seed"};
    case Command::mc_angle: return {"n", "m", "k", "C", "trials", "seed"};
    case Command::certify: return {"n", "m", "k", "C", "seed", "source"};
    case Command::simulate: return {"delta", "rho", "C", "n", "trials", "tail", "seed", "kappa"};
    case Command::noisy:
      return {"delta", "rho", "C", "n", "epsilon", "trials", "tail", "seed", "relative"};
  }
  return {};
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::threshold: return "threshold";
    case Command::curve: return "curve";
    case Command::surface: return "surface";
    case Command::exponents: return "exponents";
    case Command::angle: return "angle";
    case Command::mc_angle: return "mc-angle";
    case Command::certify: return "certify";
    case Command::simulate: return "simulate";
    case Command::noisy: return "noisy";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::threshold, Command::curve, Command::surface, Command::exponents,
                    Command::angle, Command::mc_angle, Command::certify, Command::simulate,
                    Command::noisy})
    if (name == to_string(c)) return c;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string usage_text() {
  return "commands:\n"
         "  threshold --delta D --C C [--mode weak|sectional|strong] [--tol T]\n"
         "  curve     --delta D --C start:stop:count [--mode M]\n"
         "  surface   --delta start:stop:count --C start:stop:count [--mode M]\n"
         "  exponents --delta D --rho R --C C [--mode M] [--grid N]\n"
         "  angle     --n N --m M --k K [--C C] [--samples S] [--seed S]\n"
         "  mc-angle  --n N --m M --k K [--C C] [--trials T] [--seed S]\n"
         "  certify   --n N --m M --k K [--C C] [--seed S] [--source matrix|gaussian]\n"
         "  simulate  --delta D --rho R --C C --n N [--trials T] [--tail L] [--seed S] [--kappa B]\n"
         "  noisy     --delta D --rho R --C C --n N --epsilon E [--trials T] [--tail L]\n"
         "            [--relative B] [--seed S]\n";
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], "grid")};
  if (parts.size() != 3)
    throw std::invalid_argument("grid: expected 'start:stop:count', got '" + text + "'");
  const double lo = parse_double(parts[0], "grid.start");
  const double hi = parse_double(parts[1], "grid.stop");
  const long long count = parse_integer(parts[2], "grid.count");
  if (count < 1) throw std::invalid_argument("grid: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> values(static_cast<std::size_t>(count));
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (long long i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = lo + step * i;
  values.back() = hi;  // inclusive endpoints, exact
  return values;
}

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    const Params params(config.parameters, allowed_keys(config.command));
    const OutputFormat format = resolve_format(config.format, config.command);
    const int jobs = config.jobs >= 1 ? config.jobs : 1;
    switch (config.command) {
      case Command::threshold: result.output = cmd_threshold(params, format); break;
      case Command::curve: result.output = cmd_curve(params, format, jobs); break;
      case Command::surface: result.output = cmd_surface(params, format, jobs); break;
      case Command::exponents: result.output = cmd_exponents(params, format, jobs); break;
      case Command::angle: result.output = cmd_angle(params, format); break;
      case Command::mc_angle: result.output = cmd_mc_angle(params, format, jobs); break;
      case Command::certify: result.output = cmd_certify(params, format); break;
      case Command::simulate: result.output = cmd_simulate(params, format, jobs); break;
      case Command::noisy: result.output = cmd_noisy(params, format, jobs); break;
    }
  } catch (const std::invalid_argument& e) {
    result.exit_code = 2;
    result.error = e.what();
    return result;
  } catch (const std::domain_error& e) {
    result.exit_code = 2;
    result.error = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.error = e.what();
    return result;
  }

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
      result.exit_code = 2;
      result.error = "cannot open output path '" + config.output_path + "'";
      return result;
    }
    out << result.output;
  }
  return result;
}

}  // namespace l1geom::run
