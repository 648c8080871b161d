#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "qprob/io.hpp"

using namespace qprob;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qprob_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("family subcommand") {
  TempDir dir;
  CHECK(run({"family", "--kind", "qubit", "--n", "3", "--q", "0.5", "--out", dir / "f.json"}).code == 0);
  const auto j = io::read_json_file(dir / "f.json");
  CHECK(j["members"].size() == 3);
  CHECK(j["dim"] == 8);

  CHECK(run({"family", "--kind", "box", "--d", "4", "--out", dir / "b.json"}).code == 0);
  const auto box = io::family_from_json(io::read_json_file(dir / "b.json"));
  CHECK(box.family.dim() == 16);
  CHECK(box.family.all_diagonal());

  const auto bad = run({"family", "--kind", "qubit", "--n", "3", "--q", "1.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("DomainError") != std::string::npos);
  CHECK(run({"family", "--kind", "qubit", "--q", "0.5"}).code == 2);
  CHECK(run({"family", "--kind", "spin", "--n", "2"}).code == 2);
  CHECK(run({"family", "--kind", "box", "--d", "9"}).code == 2);
  CHECK(run({"family", "--kind", "box", "--d", "2", "--format", "csv"}).code == 2);
}

TEST_CASE("family output round trips byte for byte") {
  TempDir dir;
  const auto first = run({"family", "--kind", "qubit", "--n", "3", "--q", "0.3"});
  REQUIRE(first.code == 0);
  const auto parsed = io::family_from_json(io::Json::parse(first.out));
  CHECK(io::family_to_json(parsed, "qubit").dump(2) + "\n" == first.out);
}

TEST_CASE("measure subcommand") {
  TempDir dir;
  REQUIRE(run({"family", "--kind", "qubit", "--n", "3", "--q", "0.5", "--out", dir / "f.json"}).code == 0);
  const auto csv = run({"measure", "--family", dir / "f.json", "--depth", "3", "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "word,weight");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::abs(std::stod(line.substr(line.find(',') + 1)) - 0.125) < 1e-12);
  }
  CHECK(rows == 8);

  REQUIRE(run({"family", "--kind", "box", "--d", "2", "--out", dir / "b.json"}).code == 0);
  const auto box = run({"measure", "--family", dir / "b.json", "--depth", "2"});
  REQUIRE(box.code == 0);
  const auto mu = io::measure_from_json(io::Json::parse(box.out));
  for (double w : mu.weights()) CHECK(w == 0.25);
  CHECK(io::to_json(mu).dump(2) + "\n" == box.out);

  const auto deep = run({"measure", "--family", dir / "f.json", "--depth", "20"});
  CHECK(deep.code == 2);
  CHECK(deep.err.find("SizeGuard") != std::string::npos);
  CHECK(run({"measure", "--family", dir / "missing.json", "--depth", "2"}).code == 2);
}

TEST_CASE("rn subcommand") {
  TempDir dir;
  REQUIRE(run({"family", "--kind", "qubit", "--n", "2", "--q", "0.5", "--out", dir / "f.json"}).code == 0);

  REQUIRE(run({"measure", "--family", dir / "f.json", "--depth", "2", "--out", dir / "own.json"}).code == 0);
  const auto own = run({"rn", "--family", dir / "f.json", "--target", dir / "own.json"});
  REQUIRE(own.code == 0);
  CHECK(io::Json::parse(own.out)["verification"]["max_deviation"].get<double>() <= 1e-9);

  io::write_text_file(dir / "nu.json", R"({"depth":2,"weights":{"00":0.25,"01":0.25,"10":0.5,"11":0}})");
  REQUIRE(run({"rn", "--family", dir / "f.json", "--target", dir / "nu.json", "--out", dir / "rn.json"}).code == 0);
  const auto doc = io::read_json_file(dir / "rn.json");
  CHECK(doc["verification"]["max_deviation"].get<double>() <= 1e-9);
  CHECK(std::abs(doc["verification"]["norm_psi_prime"].get<double>() - 1.0) < 1e-10);

  // The result is itself a family file whose measure is the target.
  const auto again = run({"measure", "--family", dir / "rn.json", "--depth", "2"});
  REQUIRE(again.code == 0);
  const auto realised = io::measure_from_json(io::Json::parse(again.out));
  CHECK(max_atom_deviation(realised, io::measure_from_json(io::read_json_file(dir / "nu.json"))) < 1e-12);

  // A point-mass state cannot reach a measure charging a null atom.
  io::write_text_file(dir / "point.json", R"({"depth":2,"weights":{"00":1}})");
  REQUIRE(run({"rn", "--family", dir / "f.json", "--target", dir / "point.json", "--out", dir / "p.json"}).code == 0);
  io::write_text_file(dir / "other.json", R"({"depth":2,"weights":{"11":1}})");
  const auto singular = run({"rn", "--family", dir / "p.json", "--target", dir / "other.json"});
  CHECK(singular.code == 3);
  CHECK(singular.err.find("NotAbsolutelyContinuous") != std::string::npos);

  io::write_text_file(dir / "half.json", R"({"depth":2,"weights":{"00":0.5}})");
  CHECK(run({"rn", "--family", dir / "f.json", "--target", dir / "half.json"}).code == 2);
}

TEST_CASE("slln subcommand") {
  TempDir dir;
  const std::vector<std::string> args{"slln", "--q", "0.3", "--N", "12", "--delta", "0.2", "--samples", "10000", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = io::Json::parse(a.out);
  CHECK(j["tests"][0]["within_4sigma"] == true);
  CHECK(std::abs(j["tests"][0]["exact_mass"].get<double>() - 0.876374106993) < 1e-11);

  auto other = args;
  other.back() = "8";
  CHECK(run(other).out != a.out);

  const auto empty = run({"slln", "--q", "0.5", "--N", "10", "--samples", "0"});
  REQUIRE(empty.code == 0);
  CHECK(io::Json::parse(empty.out)["tests"][0]["pass_rate"].is_null());

  CHECK(run({"slln", "--q", "0", "--N", "10"}).code == 2);
  CHECK(run({"slln", "--q", "0.5", "--N", "10", "--depth", "5"}).code == 2);
  CHECK(run({"slln", "--q", "0.5", "--N", "abc"}).code == 2);

  auto csv = args;
  csv.insert(csv.end(), {"--format", "csv"});
  const auto c = run(csv);
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("test,", 0) == 0);
}

TEST_CASE("slln reruns from its own report and from a config file") {
  TempDir dir;
  REQUIRE(run({"slln", "--q", "0.4", "--N", "16", "--depth", "20", "--samples", "500", "--seed", "3", "--out",
               dir / "r.json"})
              .code == 0);
  const auto rerun = run({"slln", "--config", dir / "r.json"});
  REQUIRE(rerun.code == 0);
  CHECK(rerun.out == slurp(dir / "r.json"));

  io::write_text_file(dir / "c.json",
                      R"({"q":0.5,"N":8,"depth":8,"delta":0.25,"samples":1000,"seed":1,)"
                      R"("tests":[{"name":"short","center":0.5,"delta":0.25,"N":4}]})");
  const auto cfg = run({"slln", "--config", dir / "c.json"});
  REQUIRE(cfg.code == 0);
  const auto j = io::Json::parse(cfg.out);
  CHECK(j["tests"].size() == 2);
  CHECK(j["tests"][1]["name"] == "short");
  // Flags override the file.
  const auto overridden = io::Json::parse(run({"slln", "--config", dir / "c.json", "--seed", "2"}).out);
  CHECK(overridden["seed"] == 2);
  CHECK(overridden["config"]["N"] == 8);
}

TEST_CASE("relative output paths resolve against the output directory variable") {
  TempDir dir;
  ::setenv(cli::kOutDirEnv, dir.path.c_str(), 1);
  const auto r = run({"family", "--kind", "box", "--d", "1", "--out", "rel.json"});
  ::unsetenv(cli::kOutDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir.path / "rel.json"));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
