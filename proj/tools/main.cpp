#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lipkit/error.hpp"
#include "lipkit/scenario.hpp"

namespace {

// 0 pass, 1 mathematical failure, 2 usage/validation, 3 internal.
int exit_code_for(lipkit::ErrorKind kind) {
  switch (kind) {
    case lipkit::ErrorKind::solver_failure:
      return 1;
    case lipkit::ErrorKind::internal:
      return 3;
    default:
      return 2;
  }
}

struct OutputFlags {
  std::string out_path;
  bool json_only = false;
};

// Relative --out paths land in $LIPKIT_OUT_DIR when it is set.
std::string resolve_out_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("LIPKIT_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string resolved(dir);
  if (resolved.back() != '/') resolved += '/';
  return resolved + path;
}

int emit(const lipkit::RunReport& report, const OutputFlags& flags, double elapsed_ms) {
  const std::string machine = report.machine.dump(2);
  if (!flags.out_path.empty()) {
    const std::string path = resolve_out_path(flags.out_path);
    std::ofstream out(path);
    if (!out) {
      std::cerr << "error: cannot write report to \"" << path << "\"\n";
      return 2;
    }
    out << machine << "\n";
  }
  if (flags.json_only) {
    std::cout << machine << "\n";
  } else {
    std::cout << report.text;
    std::cout << "\nmachine block:\n" << machine << "\n";
    char line[64];
    std::snprintf(line, sizeof(line), "\nelapsed %.2f ms\n", elapsed_ms);
    std::cout << line;
  }
  return report.pass ? 0 : 1;
}

int list_demos() {
  const auto names = lipkit::demo_names();
  std::cout << "available demos (" << names.size() << "):\n";
  for (const auto& name : names) {
    const lipkit::json& doc = lipkit::demo_scenario(name);
    std::string padded = "  " + name;
    if (padded.size() < 26) padded.append(26 - padded.size(), ' ');
    std::cout << padded << doc.value("theorem", "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Lipschitz perturbation toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string demo_name;
  std::uint64_t seed_value = 0;
  double tolerance_value = 0.0;
  OutputFlags flags;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario file");
  run_cmd->add_option("file", scenario_path, "scenario JSON document")->required();

  CLI::App* demo_cmd = app.add_subcommand("demo", "run one entry of the built-in gallery");
  demo_cmd->add_option("name", demo_name, "demo name (see the demos verb)")->required();

  CLI::Option* seed_opts[2];
  CLI::Option* tol_opts[2];
  CLI::App* verbs[2] = {run_cmd, demo_cmd};
  for (int i = 0; i < 2; ++i) {
    seed_opts[i] = verbs[i]->add_option("--seed", seed_value, "override the scenario seed");
    tol_opts[i] = verbs[i]->add_option("--tolerance", tolerance_value,
                                       "override the expectation tolerance");
    verbs[i]->add_option("--out", flags.out_path, "write the machine block to this file");
    verbs[i]->add_flag("--json-only", flags.json_only, "print only the machine block");
  }

  app.add_subcommand("demos", "list the built-in gallery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("demos")) return list_demos();

  const int verb = app.got_subcommand(run_cmd) ? 0 : 1;
  lipkit::RunOptions options;
  if (seed_opts[verb]->count() > 0) options.seed_override = seed_value;
  if (tol_opts[verb]->count() > 0) options.tolerance_override = tolerance_value;

  try {
    const auto start = std::chrono::steady_clock::now();
    lipkit::RunReport report =
        verb == 0 ? lipkit::run_scenario_file(scenario_path, options)
                  : lipkit::run_scenario_json(lipkit::demo_scenario(demo_name), options);
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    return emit(report, flags, elapsed_ms);
  } catch (const lipkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
