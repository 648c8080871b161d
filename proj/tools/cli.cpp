#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "qprob/error.hpp"
#include "qprob/families.hpp"
#include "qprob/io.hpp"
#include "qprob/pvm.hpp"
#include "qprob/randomness.hpp"
#include "qprob/state_measures.hpp"

namespace qprob::cli {

namespace {

// Families are written as dense matrices, so the file grows as dim^2 per member.
constexpr int kMaxFamilyBits = 8;

struct Output {
  std::string path;
  std::string format = "json";
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("--out", o.path, "output file (stdout when omitted)");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

std::string resolve(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) return (std::filesystem::path(dir) / p).string();
  }
  return p.string();
}

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
  } else {
    io::write_text_file(resolve(o.path), text);
  }
}

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

void require_json(const Output& o, const char* cmd) {
  if (o.format != "json") fail(ErrorKind::DomainError, std::string(cmd) + " only writes json");
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotAbsolutelyContinuous:
    case ErrorKind::NotCommuting:
    case ErrorKind::ZeroVector:
      return kExitPrecondition;
    default:
      return kExitInvalid;
  }
}

struct FamilyArgs {
  std::string kind;
  int n = 0;
  int d = 0;
  double q = 0.5;
  Output out;
};

void run_family(const FamilyArgs& a, std::ostream& out) {
  require_json(a.out, "family");
  const int bits = a.kind == "qubit" ? a.n : a.d;
  if (bits > kMaxFamilyBits) {
    fail(ErrorKind::SizeGuard, "family of " + std::to_string(bits) + " members exceeds the file limit of " +
                                   std::to_string(kMaxFamilyBits));
  }
  const auto f = a.kind == "qubit" ? qubit_chain(a.n, a.q) : box_digits(a.d);
  emit(a.out, dump(io::family_to_json(f, a.kind)), out);
}

struct MeasureArgs {
  std::string family;
  int depth = 0;
  Output out;
};

void run_measure(const MeasureArgs& a, std::ostream& out) {
  const auto f = io::family_from_json(io::read_json_file(a.family));
  const auto map = build_pvm(f.family, a.depth);
  const auto mu = induced_measure(map, f.state);
  emit(a.out, a.out.format == "csv" ? io::measure_to_csv(mu) : dump(io::to_json(mu)), out);
}

struct RnArgs {
  std::string family;
  std::string target;
  Output out;
};

void run_rn(const RnArgs& a, std::ostream& out) {
  require_json(a.out, "rn");
  const auto j = io::read_json_file(a.family);
  const auto f = io::family_from_json(j);
  const auto nu = io::measure_from_json(io::read_json_file(a.target));
  const auto map = build_pvm(f.family, nu.depth());
  const auto psi_prime = radon_nikodym_vector(map, f.state, nu);
  const auto realised = induced_measure(map, psi_prime);

  auto doc = io::family_to_json({f.family, psi_prime}, j.value("kind", std::string("custom")));
  doc["verification"] = {{"depth", nu.depth()},
                         {"norm_psi", f.state.amplitudes().norm()},
                         {"norm_psi_prime", psi_prime.amplitudes().norm()},
                         {"max_deviation", max_atom_deviation(realised, nu)}};
  emit(a.out, dump(doc), out);
}

struct SllnArgs {
  ExperimentConfig config;
  std::string config_file;
  Output out;
};

void run_slln(SllnArgs a, const CLI::App& cmd, std::ostream& out) {
  if (!a.config_file.empty()) {
    auto j = io::read_json_file(a.config_file);
    // A previous report carries its configuration under "config".
    if (j.contains("config")) j = j.at("config");
    const auto file = io::config_from_json(j);
    const auto flags = a.config;
    a.config = file;
    if (cmd.count("--q")) a.config.q = flags.q;
    if (cmd.count("--N")) a.config.window = flags.window;
    if (cmd.count("--depth")) a.config.depth = flags.depth;
    if (cmd.count("--delta")) a.config.delta = flags.delta;
    if (cmd.count("--samples")) a.config.samples = flags.samples;
    if (cmd.count("--seed")) a.config.seed = flags.seed;
  } else if (!cmd.count("--depth")) {
    a.config.depth = a.config.window;
  }
  const auto report = run_slln_experiment(a.config);
  emit(a.out, a.out.format == "csv" ? io::report_to_csv(report) : dump(io::to_json(report)), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-depth projection-valued measures, induced measures and randomness experiments", "qprob"};
  app.require_subcommand(1);

  FamilyArgs fam;
  auto* family_cmd = app.add_subcommand("family", "write a commuting family and its state");
  family_cmd->add_option("--kind", fam.kind)->required()->check(CLI::IsMember({"qubit", "box"}));
  family_cmd->add_option("--n", fam.n, "qubit chain length");
  family_cmd->add_option("--d", fam.d, "box digit count");
  family_cmd->add_option("--q", fam.q, "qubit weight of outcome 1");
  add_output(family_cmd, fam.out);

  MeasureArgs meas;
  auto* measure_cmd = app.add_subcommand("measure", "tabulate the measure a family's state induces");
  measure_cmd->add_option("--family", meas.family)->required();
  measure_cmd->add_option("--depth", meas.depth)->required();
  add_output(measure_cmd, meas.out);

  RnArgs rn;
  auto* rn_cmd = app.add_subcommand("rn", "find a state in the cyclic subspace realising a target measure");
  rn_cmd->add_option("--family", rn.family)->required();
  rn_cmd->add_option("--target", rn.target)->required();
  add_output(rn_cmd, rn.out);

  SllnArgs slln;
  auto* slln_cmd = app.add_subcommand("slln", "Monte Carlo frequency band experiment");
  slln_cmd->add_option("--q", slln.config.q);
  slln_cmd->add_option("--N", slln.config.window);
  slln_cmd->add_option("--depth", slln.config.depth, "sequence length (defaults to N)");
  slln_cmd->add_option("--delta", slln.config.delta);
  slln_cmd->add_option("--samples", slln.config.samples);
  slln_cmd->add_option("--seed", slln.config.seed);
  slln_cmd->add_option("--config", slln.config_file, "JSON configuration or previous report");
  add_output(slln_cmd, slln.out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*family_cmd) {
      if (fam.kind == "qubit" && !family_cmd->count("--n")) fail(ErrorKind::DomainError, "--n is required for qubit");
      if (fam.kind == "box" && !family_cmd->count("--d")) fail(ErrorKind::DomainError, "--d is required for box");
      run_family(fam, out);
    } else if (*measure_cmd) {
      run_measure(meas, out);
    } else if (*rn_cmd) {
      run_rn(rn, out);
    } else if (*slln_cmd) {
      run_slln(slln, *slln_cmd, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace qprob::cli
