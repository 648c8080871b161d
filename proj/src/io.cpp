#include "qprob/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qprob/error.hpp"

namespace qprob::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("field \"") + key + "\": " + e.what());
  }
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex pair_value(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(ErrorKind::ParseError, "complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::string optional_csv(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back(complex_pair(m(i, k)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = get<Index>(j, "rows");
  const auto cols = get<Index>(j, "cols");
  const auto& data = field(j, "data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    fail(ErrorKind::ParseError, "matrix data does not match its declared shape");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) m(i, k) = pair_value(data[static_cast<std::size_t>(i * cols + k)]);
  }
  return m;
}

Json to_json(const StateVector& psi) {
  Json amps = Json::array();
  for (Index i = 0; i < psi.dim(); ++i) amps.push_back(complex_pair(psi.amplitudes()(i)));
  return {{"dim", psi.dim()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const Json& j) {
  const auto dim = get<Index>(j, "dim");
  const auto& amps = field(j, "amplitudes");
  if (dim < 1 || !amps.is_array() || static_cast<Index>(amps.size()) != dim) {
    fail(ErrorKind::ParseError, "state amplitudes do not match the declared dimension");
  }
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = pair_value(amps[static_cast<std::size_t>(i)]);
  return StateVector(std::move(v));
}

Json to_json(const CylinderUnion& x) {
  Json words = Json::array();
  for (const auto& w : x.words()) words.push_back(w.to_string());
  return {{"depth", x.depth()}, {"words", std::move(words)}};
}

CylinderUnion cylinder_union_from_json(const Json& j) {
  const int depth = get<int>(j, "depth");
  std::vector<BinaryWord> words;
  for (const auto& w : get<std::vector<std::string>>(j, "words")) words.push_back(BinaryWord::parse(w));
  return CylinderUnion::from_words(depth, words);
}

Json to_json(const MeasureTable& mu) {
  Json weights = Json::object();
  for (WordCode c = 0; c < mu.weights().size(); ++c) {
    weights[BinaryWord::from_code(c, mu.depth()).to_string()] = mu.weights()[c];
  }
  return {{"depth", mu.depth()}, {"weights", std::move(weights)}};
}

MeasureTable measure_from_json(const Json& j) {
  const int depth = get<int>(j, "depth");
  if (depth < 0 || depth > kMaxSetDepth) fail(ErrorKind::SizeGuard, "measure depth out of range");
  const auto& weights = field(j, "weights");
  if (!weights.is_object()) fail(ErrorKind::ParseError, "\"weights\" must be an object keyed by word");
  std::vector<double> w(std::size_t{1} << depth, 0.0);
  for (const auto& [key, value] : weights.items()) {
    const auto word = BinaryWord::parse(key);
    if (static_cast<int>(word.size()) != depth) fail(ErrorKind::ParseError, "word \"" + key + "\" has the wrong length");
    if (!value.is_number()) fail(ErrorKind::ParseError, "weight of \"" + key + "\" is not a number");
    w[word.code()] = value.get<double>();
  }
  // Words left out carry zero weight.
  return MeasureTable(depth, std::move(w));
}

std::string measure_to_csv(const MeasureTable& mu) {
  std::string out = "word,weight\n";
  for (WordCode c = 0; c < mu.weights().size(); ++c) {
    out += BinaryWord::from_code(c, mu.depth()).to_string() + "," + format_double(mu.weights()[c]) + "\n";
  }
  return out;
}

Json family_to_json(const FamilyWithState& f, const std::string& kind) {
  Json members = Json::array();
  for (const auto& p : f.family.members()) members.push_back(to_json(p.matrix()));
  return {{"format", "qprob.family/1"},
          {"kind", kind},
          {"dim", f.family.dim()},
          {"members", std::move(members)},
          {"state", to_json(f.state)}};
}

FamilyWithState family_from_json(const Json& j) {
  const auto dim = get<Index>(j, "dim");
  const auto& members_json = field(j, "members");
  if (!members_json.is_array() || members_json.empty()) fail(ErrorKind::ParseError, "\"members\" must be a non-empty array");
  std::vector<Projection> members;
  for (const auto& m : members_json) {
    auto p = make_projection(matrix_from_json(m));
    if (p.dim() != dim) fail(ErrorKind::DimMismatch, "member dimension differs from declared dim");
    members.push_back(std::move(p));
  }
  auto state = state_from_json(field(j, "state"));
  if (state.dim() != dim) fail(ErrorKind::DimMismatch, "state dimension differs from declared dim");
  return {PropositionFamily(std::move(members)), std::move(state)};
}

Json atoms_to_json(const ProjectionValuedMap& map) {
  Json atoms = Json::object();
  for (WordCode c = 0; c < map.atom_count(); ++c) {
    atoms[BinaryWord::from_code(c, map.depth()).to_string()] = to_json(map.atom(c).matrix());
  }
  return {{"depth", map.depth()}, {"atoms", std::move(atoms)}};
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.q = get<double>(j, "q");
  c.window = get<std::size_t>(j, "N");
  c.depth = get<std::size_t>(j, "depth");
  c.delta = get<double>(j, "delta");
  c.samples = get<std::uint64_t>(j, "samples");
  c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("tests")) {
    for (const auto& t : j.at("tests")) {
      BandSpec b;
      b.name = get<std::string>(t, "name");
      b.center = get<double>(t, "center");
      b.delta = get<double>(t, "delta");
      b.window = get<std::size_t>(t, "N");
      c.tests.push_back(std::move(b));
    }
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json tests = Json::array();
  for (const auto& t : c.tests) tests.push_back({{"name", t.name}, {"center", t.center}, {"delta", t.delta}, {"N", t.window}});
  return {{"q", c.q},         {"N", c.window},       {"depth", c.depth}, {"delta", c.delta},
          {"samples", c.samples}, {"seed", c.seed}, {"tests", std::move(tests)}};
}

Json to_json(const ExperimentReport& r) {
  Json tests = Json::array();
  for (const auto& t : r.tests) {
    tests.push_back({{"name", t.band.name},
                     {"center", t.band.center},
                     {"delta", t.band.delta},
                     {"N", t.band.window},
                     {"exact_mass", t.exact_mass},
                     {"passes", t.passes},
                     {"pass_rate", optional_number(t.pass_rate)},
                     {"sigma", t.sigma},
                     {"z_score", optional_number(t.z_score)},
                     {"within_4sigma", t.within_4sigma}});
  }
  return {{"seed", r.config.seed},
          {"samples", r.config.samples},
          {"config", to_json(r.config)},
          {"frequency", {{"mean", optional_number(r.frequency_mean)}, {"stddev", optional_number(r.frequency_stddev)}}},
          {"tests", std::move(tests)},
          {"grand_test",
           {{"exact_mass", optional_number(r.grand_exact_mass)},
            {"union_bound", r.grand_union_bound},
            {"passes", r.grand_passes},
            {"pass_rate", optional_number(r.grand_pass_rate)}}}};
}

std::string report_to_csv(const ExperimentReport& r) {
  std::string out = "test,center,delta,N,exact_mass,passes,pass_rate,sigma,z_score,within_4sigma\n";
  for (const auto& t : r.tests) {
    out += t.band.name + "," + format_double(t.band.center) + "," + format_double(t.band.delta) + "," +
           std::to_string(t.band.window) + "," + format_double(t.exact_mass) + "," + std::to_string(t.passes) + "," +
           optional_csv(t.pass_rate) + "," + format_double(t.sigma) + "," + optional_csv(t.z_score) + "," +
           (t.within_4sigma ? "true" : "false") + "\n";
  }
  out += "grand,,,," + optional_csv(r.grand_exact_mass) + "," + std::to_string(r.grand_passes) + "," +
         optional_csv(r.grand_pass_rate) + ",,,\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

}  // namespace qprob::io
