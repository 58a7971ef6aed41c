#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdmp/errors.hpp"
#include "pdmp/harness.hpp"

namespace {

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw pdmp::Error(pdmp::ErrorCode::BadConfig, "--param expects k=v, got '" + kv + "'");
    try {
      std::size_t used = 0;
      const std::string rhs = kv.substr(eq + 1);
      out[kv.substr(0, eq)] = std::stod(rhs, &used);
      if (used != rhs.size()) throw std::invalid_argument(rhs);
    } catch (const std::logic_error&) {
      throw pdmp::Error(pdmp::ErrorCode::BadConfig, "--param value is not a number: '" + kv + "'");
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pdmp::Error(pdmp::ErrorCode::BadConfig, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification of piecewise deterministic Markov processes"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string model;
  std::vector<std::string> params;
  std::string h, f, g, out, format;
  double t = -1.0;
  long long n = -1;
  long long seed = -1;
  int workers = 0;
  bool variance_reduction = false;
  bool dump_config = false;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config with sections model, h, experiment, rng");
    sub->add_option("--model", model, "ctmc3, ctmc2, cramer-lundberg (cl), boundary-reset, aimd, ctmc3-clock");
    sub->add_option("--param", params, "model parameter k=v (repeatable)");
    sub->add_option("--h", h, "tilting function name");
    sub->add_option("--f", f, "test function name");
    sub->add_option("--g", g, "observable name");
    sub->add_option("--t", t, "time horizon");
    sub->add_option("--n", n, "replications");
    sub->add_option("--seed", seed, "seed");
    sub->add_option("--out", out, "output path (stdout if absent)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads");
    sub->add_flag("--variance-reduction", variance_reduction,
                  "is-consistency: require importance stderr below crude stderr");
    sub->add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");
  };
  std::vector<CLI::App*> subs;
  for (const std::string& name : pdmp::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_flags(sub);
    subs.push_back(sub);
  }
  add_flags(&app);

  CLI11_PARSE(app, argc, argv);

  try {
    pdmp::ExperimentConfig c;
    if (!config_path.empty()) c = pdmp::config_from_json(read_file(config_path));
    for (CLI::App* sub : subs)
      if (sub->parsed()) c.experiment = sub->get_name();
    if (!model.empty()) c.model = model;
    for (const auto& [k, v] : parse_params(params)) c.params[k] = v;
    if (!h.empty()) c.h = h;
    if (!f.empty()) c.f = f;
    if (!g.empty()) c.g = g;
    if (t >= 0.0) c.t = t;
    if (n >= 0) c.n = static_cast<std::size_t>(n);
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (workers > 0) c.workers = static_cast<std::size_t>(workers);
    if (variance_reduction) c.variance_reduction = true;
    if (!format.empty()) c.format = format;
    if (!out.empty()) c.out = out;

    if (dump_config) {
      std::cout << pdmp::config_to_json(c) << "\n";
      return 0;
    }

    const pdmp::ExperimentReport report = pdmp::run_experiment(c);
    std::string text;
    if (c.format == "csv") {
      text = pdmp::csv_header() + "\n" + pdmp::report_to_csv_row(report) + "\n";
    } else {
      text = pdmp::reports_to_json(std::span<const pdmp::ExperimentReport>(&report, 1));
    }
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(c.out);
      if (!os) throw pdmp::Error(pdmp::ErrorCode::BadConfig, "cannot write " + c.out);
      os << text;
    }
    for (const pdmp::Verdict& v : report.verdicts)
      std::fprintf(stderr, "%-22s %s  value=%.6g threshold=%.6g\n", v.name.c_str(),
                   v.passed ? "pass" : "FAIL", v.value, v.threshold);
    return report.passed() ? 0 : 2;
  } catch (const pdmp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
