#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "edgelab/cli.hpp"
#include "edgelab/error.hpp"

namespace edgelab::cli {

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"simulate-lpp", "Sample last-passage times Y(N, p)"},
    {"simulate-wishart", "Sample largest eigenvalues of the generalized Wishart matrix"},
    {"check-thm1", "LPP vs Wishart largest eigenvalue, KS over independent seeds"},
    {"check-thm2", "Edge-scaled LPP vs the limit gap probability over a p sweep"},
    {"check-thm4", "Edge-scaled finite kernel vs the limit kernel over a p sweep"},
    {"compare-joint", "Per-level marginals and joint diagnostics of the two growth processes"},
    {"kernel-eval", "Tabulate a kernel on a grid"},
    {"gap-prob", "Fredholm gap probabilities"},
    {"tw-table", "Tracy-Widom GUE distribution table"},
};

bool config_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::LengthMismatch:
    case ErrorKind::NonPositiveRate:
    case ErrorKind::ContourInfeasible:
    case ErrorKind::BadContours:
    case ErrorKind::BadGeometry:
    case ErrorKind::UnsupportedWindow:
    case ErrorKind::LevelOutOfRange:
    case ErrorKind::OutOfRange:
      return true;
    default:
      return false;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << text;
}

// "--a.b v" and "--a.b=v" pairs left over by the option parser.
std::vector<std::pair<std::string, std::string>> dotted_overrides(const std::vector<std::string>& rest) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const std::string& arg = rest[k];
    if (arg.rfind("--", 0) != 0) throw Error(ErrorKind::ConfigError, "unexpected argument '" + arg + "'");
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (k + 1 >= rest.size()) throw Error(ErrorKind::ConfigError, "missing value for '" + arg + "'");
      out.emplace_back(body, rest[++k]);
    }
  }
  return out;
}

}  // namespace

std::filesystem::path output_path(const ExperimentConfig& c) {
  const bool json_out = c.output.format == "json" || c.command.rfind("check-", 0) == 0 || c.command == "compare-joint";
  std::filesystem::path path = c.output.path.empty() ? std::filesystem::path(c.command + (json_out ? ".json" : ".csv"))
                                                      : std::filesystem::path(c.output.path);
  if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) path = std::filesystem::path(dir) / path.filename();
  return path;
}

std::filesystem::path write_report(const ExperimentConfig& c, const Report& report) {
  std::filesystem::path path = output_path(c);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (c.output.format == "csv" && !report.csv.empty()) {
    write_text(path, report.csv);
  } else {
    write_text(path, report.body.dump(2) + "\n");
  }
  for (const auto& [suffix, content] : report.tables) {
    std::filesystem::path side = path;
    side.replace_filename(path.stem().string() + "_" + suffix + ".csv");
    write_text(side, content);
  }
  return path;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Edge statistics of inhomogeneous last-passage percolation and generalized Wishart matrices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Flags {
    std::string config, out, format;
    std::optional<std::uint64_t> seed;
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    Flags& f = flags[name];
    sub->add_option("--config", f.config, "JSON config document");
    sub->add_option("--seed", f.seed, "Base seed (u64)");
    sub->add_option("--out", f.out, "Output path");
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->allow_extras();
    sub->footer("Any config field can be set by dotted path, e.g. --model.t 0.25 --sampling.p_sweep 64,128");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Flags& f = flags[command];
  try {
    json doc = default_config(command);
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + f.config);
      const json patch = json::parse(in, nullptr, false);
      if (patch.is_discarded()) throw Error(ErrorKind::ConfigError, f.config + " is not valid JSON");
      merge_config(doc, patch);
    }
    for (const auto& [path, value] : dotted_overrides(sub->remaining())) apply_override(doc, path, value);
    if (f.seed) doc["sampling"]["seed"] = *f.seed;
    if (!f.out.empty()) doc["output"]["path"] = f.out;
    if (!f.format.empty()) doc["output"]["format"] = f.format;

    const ExperimentConfig config = parse_config(command, doc);
    const Report report = run_command(config);
    const std::filesystem::path written = write_report(config, report);
    std::cout << command << ": " << (report.pass ? "PASS" : "FAIL") << (report.diagnostic ? " (diagnostic)" : "")
              << " -> " << written.string() << "\n";
    return report.pass ? kExitPass : kExitAssertion;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_kind(e.kind()) ? kExitConfig : kExitAssertion;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace edgelab::cli
