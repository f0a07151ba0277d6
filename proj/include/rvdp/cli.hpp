#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rvdp/acceptance.hpp"
#include "rvdp/config.hpp"
#include "rvdp/error.hpp"
#include "rvdp/runner.hpp"

namespace rvdp::cli {

/// Exit status when `verify` completes but a criterion fails.
inline constexpr int kVerifyFailed = 2;

struct Invocation {
  Command command = Command::Pde;
  std::string config_path;  ///< empty: all defaults
  std::vector<std::string> overrides;
  bool cli_check = true;  ///< verify only
  std::string self_path;  ///< verify only; used for the nested CLI check
};

/// Loads the config file (if any) and applies the command-line overrides.
inline RunConfig load_config(const Invocation& inv) {
  std::string text;
  if (!inv.config_path.empty()) {
    std::ifstream in(inv.config_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read config " + inv.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config(text, inv.command, inv.overrides);
}

/// Runs a resolved configuration. Errors become a one-line diagnostic on `err` and a
/// nonzero status (see rvdp::exit_code).
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err,
               const acceptance::Options& verify_opts = {}) {
  try {
    if (config.command == Command::Verify) {
      const auto results = acceptance::run_all(verify_opts);
      bool all = true;
      for (const auto& r : results) {
        out << acceptance::format_line(r) << '\n';
        all = all && r.passed;
      }
      out << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
      return all ? 0 : kVerifyFailed;
    }
    run_simulation(config);
    out << "wrote " << config.output_dir << "/run.csv\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_config(inv);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }
  acceptance::Options opts;
  if (inv.cli_check && !inv.self_path.empty()) opts.cli_path = inv.self_path;
  return run(config, out, err, opts);
}

}  // namespace rvdp::cli
