// Command-line front end; talks to the library exclusively through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncs/ncs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnstable = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    std::exit(kExitError);
  }
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

int fail(ncs_status status) {
  std::cerr << "error: " << ncs_last_error_message() << "\n";
  return status == NCS_ERR_UNSTABLE ? kExitUnstable : kExitError;
}

struct ModelHandle {
  ncs_model* ptr = nullptr;
  ~ModelHandle() { ncs_model_free(ptr); }
};

// Overrides flow into the config as a JSON patch before parsing.
std::string apply_overrides(std::string config_text, double quad_tol,
                            long long seed, int trajectories) {
  auto root = nlohmann::json::parse(config_text, nullptr, false);
  if (root.is_discarded()) return config_text;  // parser reports the error
  if (seed >= 0 || trajectories > 0) {
    auto& sim = root["simulation"];
    if (seed >= 0) sim["seed"] = static_cast<std::uint64_t>(seed);
    if (trajectories > 0) sim["trajectories"] = trajectories;
  }
  (void)quad_tol;
  return root.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary moment analysis for renewal-sampled networked "
               "control systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double quad_tol = 1e-10;
  long long seed = -1;
  int trajectories = 0;
  bool json_only = false;

  app.add_option("--quad-tol", quad_tol,
                 "Relative tolerance for the renewal quadrature");
  app.add_option("--seed", seed, "Monte Carlo seed override");
  app.add_option("--trajectories", trajectories,
                 "Monte Carlo trajectory count override");
  app.add_flag("--json", json_only, "Suppress the human-readable summary");
  app.add_option("-o,--output", out_path, "Write the result to a file");

  auto add_config = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("config", config_path, "JSON model config")
        ->required()
        ->check(CLI::ExistingFile);
  };
  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "Exact stationary moments and stability");
  CLI::App* cmd_design = app.add_subcommand("design", "Gain synthesis");
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo moment estimate");
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Parameter sweep, CSV output");
  for (CLI::App* sub : {cmd_analyze, cmd_design, cmd_simulate, cmd_sweep})
    add_config(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  std::string config_text;
  try {
    config_text = read_file(config_path);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  config_text = apply_overrides(config_text, quad_tol, seed, trajectories);

  ModelHandle model;
  if (!cmd_design->parsed()) {
    if (ncs_status s = ncs_model_parse(config_text.c_str(), &model.ptr))
      return fail(s);
  }

  char* result = nullptr;
  ncs_status status = NCS_OK;
  if (cmd_analyze->parsed()) {
    status = ncs_analyze(model.ptr, quad_tol, &result);
  } else if (cmd_simulate->parsed()) {
    status = ncs_simulate(model.ptr, config_text.c_str(), &result);
  } else if (cmd_design->parsed()) {
    status = ncs_design(config_text.c_str(), &result);
  } else {
    status = ncs_sweep(model.ptr, config_text.c_str(), &result);
  }
  if (status != NCS_OK) return fail(status);

  write_output(result, out_path);

  int exit_code = kExitOk;
  if (cmd_analyze->parsed()) {
    const auto parsed = nlohmann::json::parse(result);
    const bool stable = parsed.at("moments_valid").get<bool>();
    if (!stable) exit_code = kExitUnstable;
    if (!json_only && out_path.empty()) {
      const auto& st = parsed.at("stability");
      std::cerr << (stable ? "stable" : "UNSTABLE")
                << "  rho1=" << st.at("first_spectral_radius").get<double>()
                << "  rho2=" << st.at("second_spectral_radius").get<double>()
                << "\n";
    }
  }
  ncs_string_free(result);
  return exit_code;
}
