#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsis/qsis.h"

namespace {

using json = nlohmann::json;

int emit_error(const std::string& kind, const std::string& message, int status) {
  json e = {{"error", {{"kind", kind}, {"message", message}, {"status", status}}}};
  std::cerr << e.dump() << '\n';
  return status;
}

int emit_last_error(int status) {
  std::cerr << qsis_last_error() << '\n';
  return status;
}

// Flag text to a config value: JSON literals pass through, comma lists become
// arrays, anything else stays a string for the library to validate.
json to_value(const std::string& text, bool list) {
  std::string t = text;
  if (list && !t.empty() && t.front() != '[') t = "[" + t + "]";
  json v = json::parse(t, nullptr, false);
  if (!v.is_discarded() && (v.is_number() || v.is_boolean() || v.is_array())) return v;
  return text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi shift-invariant space toolkit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(qsis_version()));

  std::string command;
  app.add_option("command", command,
                 "verify-kernel | riesz | interpolate | cardinal | recover | counterexample | half-shift")
      ->required();

  struct Flag {
    std::string key;
    bool list;
    std::string help;
  };
  const std::vector<std::pair<std::string, Flag>> flags = {
      {"--kernel", {"kernel", false, "kernel expression, e.g. poisson or gaussian(2)"}},
      {"--alpha", {"alpha", false, "kernel parameter"}},
      {"--psi", {"psi", false, "generator of the target space"}},
      {"--phi", {"phi", false, "interpolation kernel (defaults to psi)"}},
      {"--nodes", {"nodes", false, "node set X"}},
      {"--nodes-y", {"nodes-y", false, "interpolation nodes Y (defaults to X)"}},
      {"--family", {"family", false, "kernel family tag"}},
      {"--base", {"base", false, "family base kernel"}},
      {"--alphas", {"alphas", true, "family parameters, e.g. 1,2,4,8,16"}},
      {"--condition-alphas", {"condition-alphas", true, "parameters for the condition checks"}},
      {"--seeds", {"seeds", true, "seed list"}},
      {"--Js", {"J-list", true, "window sizes for half-shift"}},
      {"--J", {"J", false, "node window half-width"}},
      {"--M", {"M", false, "quadrature or torus grid points"}},
      {"--K", {"K", false, "spectral cells, or auto"}},
      {"--X", {"X", false, "line grid half-width"}},
      {"--h", {"h", false, "line grid step"}},
      {"--Xi", {"Xi", false, "spectrum table half-width"}},
      {"--route", {"route", false, "auto | collocation | lattice-cardinal"}},
      {"--central-fraction", {"central-fraction", false, "error window as a fraction of the node reach"}},
      {"--final-ratio", {"final-ratio", false, "required final/initial L2 error ratio"}},
      {"--limit-tolerance", {"limit-tolerance", false, "threshold for limit verdicts"}},
      {"--tail-tolerance", {"tail-tolerance", false, "amalgam tail tolerance"}},
      {"--conditions", {"conditions", false, "run the condition checks (true/false)"}},
      {"--preset", {"preset", false, "named experiment"}},
      {"--seed", {"seed", false, "random seed"}},
  };
  std::map<std::string, std::string> given;
  for (const auto& [name, f] : flags) app.add_option(name, given[f.key], f.help);

  std::string config_path, out_dir = "qsis-out";
  bool quiet = false;
  app.add_option("--config", config_path, "config file (key = value lines or JSON)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--quiet", quiet, "print nothing on success");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("usage", e.what(), QSIS_E_USAGE);
  }

  json config = json::object();
  if (!config_path.empty()) {
    std::string text;
    try {
      text = read_file(config_path);
    } catch (const std::exception& e) {
      return emit_error("io", e.what(), QSIS_E_USAGE);
    }
    char* parsed = nullptr;
    if (qsis_status s = qsis_config_parse(text.c_str(), &parsed); s != QSIS_OK) return emit_last_error(s);
    config = json::parse(parsed);
    qsis_string_free(parsed);
  }
  for (const auto& [name, f] : flags)
    if (app.count(name) > 0) config[f.key] = to_value(given[f.key], f.list);

  char* report = nullptr;
  const qsis_status s = qsis_run(command.c_str(), config.dump().c_str(), out_dir.c_str(), &report);
  if (s != QSIS_OK && s != QSIS_VERDICT_FAIL) return emit_last_error(s);
  json r = json::parse(report);
  qsis_string_free(report);
  if (!quiet) {
    const std::string stem = out_dir + "/" + command + "-" + r.at("hash").get<std::string>();
    json summary = {{"command", command}, {"hash", r.at("hash")}, {"report", stem + ".json"}, {"verdict", r.at("verdict")}};
    std::cout << summary.dump(2) << '\n';
  }
  return s;
}
