// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cssim/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/random.hpp"
#include "cssim/subspace.hpp"
#include "cssim/symmetry.hpp"
#include "json.hpp"

namespace cssim {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ------------------------------------------------------------ key positions

// Forward iterator over the config text that counts the newlines it steps over.
class LineCountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator() = default;
  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    LineCountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const LineCountingIterator& a, const LineCountingIterator& b) { return a.p_ == b.p_; }

 private:
  const char* p_ = nullptr;
  std::size_t* line_ = nullptr;
};

std::string escape_pointer_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

using KeyLines = std::map<std::string, std::size_t>;

// Records the line of every object key, indexed by JSON pointer. The lexer
// has consumed exactly the closing quote of a key when `key` fires.
class KeyLineCollector : public nlohmann::json_sax<json> {
 public:
  explicit KeyLineCollector(const std::size_t* line) : line_(line) {}
  KeyLines lines;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    value();
    frames_.push_back({true, 0, prefix(), {}});
    return true;
  }
  bool key(string_t& k) override {
    Frame& f = frames_.back();
    f.current = f.base + "/" + escape_pointer_token(k);
    if (!lines.emplace(f.current, *line_).second) {
      throw ParseError("config line " + std::to_string(*line_) + ": duplicate key \"" + k + "\"");
    }
    return true;
  }
  bool end_object() override {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    value();
    frames_.push_back({false, 0, prefix(), {}});
    return true;
  }
  bool end_array() override {
    frames_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    throw ParseError(std::string("config: ") + ex.what());
  }

 private:
  struct Frame {
    bool object;
    std::size_t next_index;
    std::string base;
    std::string current;
  };
  // Pointer of the value about to start.
  std::string prefix() const {
    if (frames_.empty()) return "";
    const Frame& f = frames_.back();
    return f.object ? f.current : f.base + "/" + std::to_string(f.next_index - 1);
  }
  bool value() {
    if (!frames_.empty() && !frames_.back().object) ++frames_.back().next_index;
    return true;
  }
  const std::size_t* line_;
  std::vector<Frame> frames_;
};

KeyLines collect_key_lines(std::string_view text) {
  std::size_t line = 1;
  KeyLineCollector collector(&line);
  LineCountingIterator first(text.data(), &line);
  LineCountingIterator last(text.data() + text.size(), &line);
  json::sax_parse(first, last, &collector);
  return std::move(collector.lines);
}

// ------------------------------------------------------------ typed access

class Node {
 public:
  Node(const json& value, std::string pointer, const KeyLines& lines)
      : value_(value), pointer_(std::move(pointer)), lines_(lines) {}

  const json& value() const { return value_; }
  const std::string& pointer() const { return pointer_; }

  std::size_t line() const {
    std::string p = pointer_;
    while (!p.empty()) {
      if (auto it = lines_.find(p); it != lines_.end()) return it->second;
      p.erase(p.rfind('/'));
    }
    return 1;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const std::string where = pointer_.empty() ? "document" : pointer_;
    throw ParseError("config line " + std::to_string(line()) + " (" + where + "): " + message);
  }

  void expect_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  void allow_keys(std::initializer_list<std::string_view> allowed) const {
    expect_object();
    for (const auto& item : value_.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        child_unchecked(item.key()).fail("unknown key \"" + item.key() + "\"");
      }
    }
  }

  bool has(std::string_view key) const { return value_.is_object() && value_.contains(key); }

  Node operator[](std::string_view key) const { return child_unchecked(std::string(key)); }

  Node at(std::size_t i) const {
    return Node(value_.at(i), pointer_ + "/" + std::to_string(i), lines_);
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned()) {
      if (value_.is_number_integer()) fail("expected a non-negative integer");
      fail("expected an integer");
    }
    return value_.get<std::uint64_t>();
  }

  std::int64_t integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<std::int64_t>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(array_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
    return out;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out(array_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::size_t>(at(i).unsigned_integer());
    return out;
  }

 private:
  Node child_unchecked(const std::string& key) const {
    static const json kNull;
    const json& v = value_.is_object() && value_.contains(key) ? value_.at(key) : kNull;
    return Node(v, pointer_ + "/" + escape_pointer_token(key), lines_);
  }

  const json& value_;
  std::string pointer_;
  const KeyLines& lines_;
};

double probability(const Node& n) {
  const double p = n.number();
  if (p < 0.0 || p > 1.0) n.fail("probability outside [0, 1]");
  return p;
}

std::size_t positive_count(const Node& n) {
  const auto v = n.unsigned_integer();
  if (v == 0) n.fail("must be positive");
  return static_cast<std::size_t>(v);
}

// ------------------------------------------------------------ sections

void parse_model(const Node& n, ModelSection& m) {
  n.allow_keys({"lattice", "J", "h", "spectrum_levels", "phase_scan", "evolution"});
  bool kagome = true;
  if (n.has("lattice")) {
    const Node lat = n["lattice"];
    if (lat.value().is_string()) {
      if (lat.string() != "kagome") lat.fail("unknown lattice \"" + lat.string() + "\"");
    } else {
      lat.allow_keys({"n_sites", "edges"});
      if (!lat.has("n_sites")) lat.fail("missing \"n_sites\"");
      if (!lat.has("edges")) lat.fail("missing \"edges\"");
      LatticeSpec spec;
      spec.n_sites = positive_count(lat["n_sites"]);
      if (spec.n_sites > kMaxDenseQubits) lat["n_sites"].fail("at most " + std::to_string(kMaxDenseQubits) + " sites");
      const Node edges = lat["edges"];
      for (std::size_t i = 0; i < edges.array_size(); ++i) {
        const auto pair = edges.at(i).indices();
        if (pair.size() != 2) edges.at(i).fail("an edge is a pair of site indices");
        spec.edges.emplace_back(std::min(pair[0], pair[1]), std::max(pair[0], pair[1]));
      }
      try {
        spec.validate();
      } catch (const Error& e) {
        edges.fail(e.what());
      }
      m.lattice = std::move(spec);
      kagome = false;
    }
  }
  const double j = n.has("J") ? n["J"].number() : -1.0;
  const double h = n.has("h") ? n["h"].number() : 0.0;
  m.params = ModelParams::xxx(j, h);
  if (n.has("spectrum_levels")) m.spectrum_levels = positive_count(n["spectrum_levels"]);
  if (n.has("phase_scan")) {
    const Node ps = n["phase_scan"];
    ps.allow_keys({"J", "h"});
    if (ps.has("J")) m.scan_j = ps["J"].numbers();
    if (ps.has("h")) m.scan_h = ps["h"].numbers();
  }
  const std::size_t sites = m.lattice.n_sites;
  if (!kagome) {
    m.parity_sites.resize(sites);
    for (std::size_t q = 0; q < sites; ++q) m.parity_sites[q] = q;
    m.initial_bitstring.clear();
    for (std::size_t q = 0; q < sites; ++q) m.initial_bitstring += (q % 2 == 0) ? '0' : '1';
  }
  if (n.has("evolution")) {
    const Node ev = n["evolution"];
    ev.allow_keys({"times", "parity_sites", "initial_bitstring"});
    if (ev.has("times")) m.times = ev["times"].numbers();
    if (ev.has("parity_sites")) {
      m.parity_sites = ev["parity_sites"].indices();
      for (std::size_t i = 0; i < m.parity_sites.size(); ++i) {
        if (m.parity_sites[i] >= sites) ev["parity_sites"].at(i).fail("site index out of range");
      }
    }
    if (ev.has("initial_bitstring")) {
      const Node b = ev["initial_bitstring"];
      m.initial_bitstring = b.string();
      if (m.initial_bitstring.size() != sites ||
          m.initial_bitstring.find_first_not_of("01") != std::string::npos) {
        b.fail("expected " + std::to_string(sites) + " characters from {0, 1}");
      }
    }
  }
}

void parse_reduction(const Node& n, ReductionSection& r) {
  n.allow_keys({"taper", "n_cs", "sizes", "spectrum_levels", "reference"});
  if (n.has("taper")) r.taper = n["taper"].boolean();
  if (n.has("n_cs")) r.n_cs = positive_count(n["n_cs"]);
  if (n.has("sizes")) {
    r.sizes = n["sizes"].indices();
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
      if (r.sizes[i] == 0) n["sizes"].at(i).fail("must be positive");
    }
  }
  if (n.has("spectrum_levels")) r.spectrum_levels = positive_count(n["spectrum_levels"]);
  if (n.has("reference")) {
    const Node ref = n["reference"];
    ref.allow_keys({"source", "keep", "fidelity"});
    if (ref.has("source")) {
      const std::string s = ref["source"].string();
      if (s == "exact") {
        r.reference = ReferenceSource::Exact;
      } else if (s == "truncated") {
        r.reference = ReferenceSource::Truncated;
      } else if (s == "perturbed") {
        r.reference = ReferenceSource::Perturbed;
      } else {
        ref["source"].fail("expected \"exact\", \"truncated\" or \"perturbed\"");
      }
    }
    if (ref.has("keep")) r.keep = positive_count(ref["keep"]);
    if (ref.has("fidelity")) {
      r.fidelity = ref["fidelity"].number();
      if (r.fidelity <= 0.0 || r.fidelity > 1.0) ref["fidelity"].fail("fidelity must lie in (0, 1]");
    }
  }
}

struct NoiseParams {
  double p2 = 0.005;
  double spectator = 0.0;
  double p10 = 0.02;
  double p01 = 0.04;
};

NoiseParams parse_noise(const Node& n) {
  if (n.value().is_string()) {
    const std::string s = n.string();
    if (s == "surrogate") return {};
    if (s == "ideal") return {0.0, 0.0, 0.0, 0.0};
    n.fail("expected \"surrogate\", \"ideal\" or an object");
  }
  n.allow_keys({"two_qubit_depolarizing", "spectator_depolarizing", "readout_p10", "readout_p01"});
  NoiseParams p;
  if (n.has("two_qubit_depolarizing")) p.p2 = probability(n["two_qubit_depolarizing"]);
  if (n.has("spectator_depolarizing")) p.spectator = probability(n["spectator_depolarizing"]);
  if (n.has("readout_p10")) p.p10 = probability(n["readout_p10"]);
  if (n.has("readout_p01")) p.p01 = probability(n["readout_p01"]);
  return p;
}

PauliSum parse_hamiltonian(const Node& n) {
  if (n.value().is_string()) {
    if (n.string() != "h_cs") n.fail("unknown built-in Hamiltonian \"" + n.string() + "\"");
    return kagome_cs5_hamiltonian();
  }
  n.allow_keys({"terms"});
  if (!n.has("terms")) n.fail("missing \"terms\"");
  const Node terms = n["terms"];
  const std::size_t m = terms.array_size();
  if (m == 0) terms.fail("at least one term is required");
  PauliSum sum;
  for (std::size_t i = 0; i < m; ++i) {
    const Node t = terms.at(i);
    if (t.array_size() != 2) t.fail("a term is [\"PAULI\", coefficient]");
    const std::string text = t.at(0).string();
    const double c = t.at(1).number();
    PauliTerm term;
    try {
      term = encode_pauli(text);
    } catch (const Error& e) {
      t.at(0).fail(e.what());
    }
    if (i == 0) {
      sum = PauliSum(term.n_qubits());
    } else if (term.n_qubits() != sum.n_qubits()) {
      t.at(0).fail("all terms must act on the same number of qubits");
    }
    term.set_coefficient(term.coefficient() * c);
    sum.add(term);
  }
  return sum.simplify();
}

void parse_vqe(const Node& n, VqeSection& v) {
  n.allow_keys({"hamiltonian", "lambdas", "shots", "tiles", "optimizer", "max_iters", "gradient_tolerance",
                "mitigation", "symmetry", "exact_expectation", "calibration_shots", "variance_steps",
                "initial_theta", "exact_energy"});
  VqeConfig& c = v.config;
  if (n.has("hamiltonian")) c.hamiltonian = parse_hamiltonian(n["hamiltonian"]);
  if (n.has("lambdas")) {
    const Node l = n["lambdas"];
    c.lambdas.clear();
    for (std::size_t i = 0; i < l.array_size(); ++i) {
      const auto x = l.at(i).integer();
      if (x < 1) l.at(i).fail("noise scale factors are positive integers");
      c.lambdas.push_back(static_cast<int>(x));
    }
  }
  if (n.has("shots")) c.shots = positive_count(n["shots"]);
  if (n.has("tiles")) c.tiles = positive_count(n["tiles"]);
  if (n.has("optimizer")) {
    const std::string s = n["optimizer"].string();
    if (s == "quasi_newton") {
      c.optimizer = OptimizerKind::QuasiNewton;
    } else if (s == "gradient_descent") {
      c.optimizer = OptimizerKind::GradientDescent;
    } else {
      n["optimizer"].fail("expected \"quasi_newton\" or \"gradient_descent\"");
    }
  }
  if (n.has("max_iters")) c.max_iters = static_cast<std::size_t>(n["max_iters"].unsigned_integer());
  if (n.has("gradient_tolerance")) {
    c.gradient_tolerance = n["gradient_tolerance"].number();
    if (c.gradient_tolerance <= 0.0) n["gradient_tolerance"].fail("must be positive");
  }
  if (n.has("mitigation")) {
    const Node m = n["mitigation"];
    m.allow_keys({"rem", "sv", "zne", "zne_on_gradients"});
    if (m.has("rem")) c.mitigation.rem = m["rem"].boolean();
    if (m.has("sv")) c.mitigation.sv = m["sv"].boolean();
    if (m.has("zne")) c.mitigation.zne = m["zne"].boolean();
    if (m.has("zne_on_gradients")) c.mitigation.zne_on_gradients = m["zne_on_gradients"].boolean();
  }
  if (n.has("symmetry")) {
    const Node s = n["symmetry"];
    s.allow_keys({"qubit", "eigenvalue"});
    if (s.has("qubit")) c.symmetry.qubit = static_cast<std::size_t>(s["qubit"].unsigned_integer());
    if (s.has("eigenvalue")) {
      const auto e = s["eigenvalue"].integer();
      if (e != 1 && e != -1) s["eigenvalue"].fail("eigenvalue must be +1 or -1");
      c.symmetry.eigenvalue = static_cast<int>(e);
    }
  }
  if (n.has("exact_expectation")) c.exact_expectation = n["exact_expectation"].boolean();
  if (n.has("calibration_shots")) c.calibration_shots = positive_count(n["calibration_shots"]);
  if (n.has("variance_steps")) c.variance_steps = static_cast<std::size_t>(n["variance_steps"].unsigned_integer());
  if (n.has("initial_theta")) {
    const Node t = n["initial_theta"];
    if (t.value().is_string()) {
      const std::string s = t.string();
      if (s == "warm_start") {
        v.initial = InitialTheta::WarmStart;
      } else if (s == "random") {
        v.initial = InitialTheta::Random;
      } else {
        t.fail("expected \"warm_start\", \"random\" or a list of " + std::to_string(kAnsatzParams) + " angles");
      }
    } else {
      const auto angles = t.numbers();
      if (angles.size() != kAnsatzParams) t.fail("expected " + std::to_string(kAnsatzParams) + " angles");
      std::copy(angles.begin(), angles.end(), v.theta.begin());
      v.initial = InitialTheta::Explicit;
    }
  }
  if (n.has("exact_energy")) v.exact_energy = n["exact_energy"].number();
}

}  // namespace

// ------------------------------------------------------------ config

PauliSum kagome_cs5_hamiltonian() {
  return PauliSum::from_strings({
      {"IIIII", -1.0}, {"ZIIII", 7.0},
      {"IZIII", 1.0},  {"IZZII", 1.0},  {"IIZZI", 1.0},  {"IIIZZ", 1.0},
      {"ZZIII", 1.0},  {"ZZZII", 1.0},  {"ZIZZI", 1.0},  {"ZIIZZ", 1.0},
      {"IXIII", -1.0}, {"IIXII", -1.0}, {"IIIXI", -1.0}, {"IIIIX", 1.0},  {"IXXXX", 1.0},
      {"ZXIII", 1.0},  {"ZIXII", 1.0},  {"ZIIXI", 1.0},  {"ZIIIX", -1.0}, {"ZXXXX", -1.0},
  });
}

PipelineConfig default_config() {
  PipelineConfig c;
  c.vqe.config.hamiltonian = kagome_cs5_hamiltonian();
  c.noise = NoiseModel::surrogate(c.vqe.config.hamiltonian.n_qubits());
  c.vqe.config.noise = c.noise;
  c.vqe.config.seed = split_seed(c.seed, "vqe");
  return c;
}

PipelineConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  const KeyLines lines = collect_key_lines(text);
  const Node root(doc, "", lines);
  root.allow_keys({"schema", "seed", "output_dir", "model", "reduction", "noise", "vqe"});
  if (!root.has("schema")) root.fail("missing \"schema\" (expected \"" + std::string(kConfigSchema) + "\")");
  if (root["schema"].string() != kConfigSchema) {
    root["schema"].fail("unsupported schema \"" + root["schema"].string() + "\" (expected \"" +
                        std::string(kConfigSchema) + "\")");
  }

  PipelineConfig c = default_config();
  if (root.has("seed")) c.seed = root["seed"].unsigned_integer();
  if (root.has("output_dir")) c.output_dir = root["output_dir"].string();
  if (root.has("model")) parse_model(root["model"], c.model);
  if (root.has("reduction")) parse_reduction(root["reduction"], c.reduction);
  const NoiseParams np = root.has("noise") ? parse_noise(root["noise"]) : NoiseParams{};
  if (root.has("vqe")) parse_vqe(root["vqe"], c.vqe);

  VqeConfig& v = c.vqe.config;
  c.noise = NoiseModel::uniform(v.hamiltonian.n_qubits(), np.p2, np.spectator, np.p10, np.p01);
  v.noise = c.noise;
  v.seed = split_seed(c.seed, "vqe");
  try {
    v.validate();
  } catch (const Error& e) {
    (root.has("vqe") ? root["vqe"] : root).fail(e.what());
  }
  return c;
}

// ------------------------------------------------------------ model

FileMap cmd_model(const PipelineConfig& config) {
  const ModelSection& m = config.model;
  const PauliSum h = build_heisenberg(m.lattice, m.params);
  const std::size_t n = m.lattice.n_sites;
  FileMap out;
  out["hamiltonian.txt"] = to_text(h);

  const SpectralDecomposition sd(h);
  {
    std::ostringstream os;
    os << "level,energy\n";
    const std::size_t levels = std::min<std::size_t>(m.spectrum_levels, sd.dimension());
    for (std::size_t i = 0; i < levels; ++i) os << i << ',' << fmt(sd.eigenvalue(i)) << '\n';
    out["spectrum.csv"] = os.str();
  }
  {
    std::ostringstream os;
    os << "J,h,E0,Mz\n";
    for (const auto& p : phase_scan(m.lattice, m.scan_j, m.scan_h)) {
      os << fmt(p.j) << ',' << fmt(p.h) << ',' << fmt(p.e0) << ',' << fmt(p.mz) << '\n';
    }
    out["phase_scan.csv"] = os.str();
  }
  {
    std::uint64_t index = 0;
    for (char bit : m.initial_bitstring) index = (index << 1) | static_cast<std::uint64_t>(bit == '1');
    PauliTerm parity(n);
    for (std::size_t q : m.parity_sites) parity.set_op(q, Pauli::Z);
    const PauliSum observable(n, std::span<const PauliTerm>(&parity, 1));
    const auto series = evolve_expectation(h, basis_state(n, index), observable, m.times);
    std::ostringstream os;
    os << "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) os << fmt(m.times[i]) << ',' << fmt(series[i]) << '\n';
    out["evolution.csv"] = os.str();
  }
  {
    const Eigen::MatrixXd mi = mutual_information_matrix(ground_representative(h, m.lattice));
    std::ostringstream os;
    os << "site_i,site_j,mutual_info\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        os << i << ',' << j << ',' << fmt(mi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
      }
    }
    out["mutual_info.csv"] = os.str();
  }
  {
    nlohmann::ordered_json j;
    const auto kernel = kernel_basis(h);
    j["n_qubits"] = n;
    j["count"] = kernel.size();
    j["generators"] = json::array();
    for (const auto& g : kernel) j["generators"].push_back(g.str());
    out["symmetry.json"] = j.dump(2) + "\n";
  }
  return out;
}

// ------------------------------------------------------------ reduce

FileMap cmd_reduce(const PipelineConfig& config) {
  const ModelSection& m = config.model;
  const ReductionSection& r = config.reduction;
  const PauliSum h = build_heisenberg(m.lattice, m.params);
  const std::size_t n = m.lattice.n_sites;
  const StateVector ground = ground_representative(h, m.lattice);

  StabilizerSet taper_set;
  if (r.taper) {
    taper_set.generators = kernel_basis(h);
    if (!taper_set.generators.empty()) taper_set.sector = sector_select(taper_set, ground, h);
  }
  const SubspaceReduction taper = project_subspace(h, taper_set);
  const PauliSum& ht = taper.reduced_h;
  const std::size_t nt = taper.n_reduced();
  if (r.n_cs > nt) {
    throw InvalidArgument("n_cs = " + std::to_string(r.n_cs) + " exceeds the " + std::to_string(nt) +
                          " qubits left after tapering");
  }
  for (std::size_t s : r.sizes) {
    if (s > nt) {
      throw InvalidArgument("subspace size " + std::to_string(s) + " exceeds the " + std::to_string(nt) +
                            " qubits left after tapering");
    }
  }

  StateVector reference = restrict_state(ground, taper);
  reference.normalize();
  switch (r.reference) {
    case ReferenceSource::Exact:
      break;
    case ReferenceSource::Truncated:
      reference = truncate_amplitudes(reference, r.keep);
      break;
    case ReferenceSource::Perturbed:
      reference = perturb_fidelity(reference, r.fidelity, split_seed(config.seed, "reference"));
      break;
  }

  auto reduce_to = [&](std::size_t size) {
    StabilizerSet s;
    if (size < nt) s = bias_from_reference(ht, reference, nt - size);
    return project_subspace(ht, s);
  };

  FileMap out;
  out["taper.json"] = reduction_to_json(taper) + "\n";
  const SubspaceReduction main = reduce_to(r.n_cs);
  out["reduction.json"] = reduction_to_json(main) + "\n";
  out["reduced_hamiltonian.txt"] = to_text(main.reduced_h);

  std::ostringstream os;
  os << "n_qubits,level,energy\n";
  auto emit = [&](std::size_t size, const PauliSum& op) {
    const auto e = lowest_eigenvalues(op, r.spectrum_levels);
    for (std::size_t i = 0; i < e.size(); ++i) os << size << ',' << i << ',' << fmt(e[i]) << '\n';
  };
  emit(n, h);
  std::set<std::size_t> sizes(r.sizes.begin(), r.sizes.end());
  for (auto it = sizes.rbegin(); it != sizes.rend(); ++it) {
    if (*it == r.n_cs) {
      emit(*it, main.reduced_h);
    } else {
      emit(*it, reduce_to(*it).reduced_h);
    }
  }
  out["spectrum_vs_size.csv"] = os.str();
  return out;
}

// ------------------------------------------------------------ vqe

VqeRun cmd_vqe(const PipelineConfig& config) {
  const VqeSection& v = config.vqe;
  VqeConfig c = v.config;
  VqeRun run;
  run.exact = v.exact_energy ? *v.exact_energy : lowest_eigenvalues(c.hamiltonian, 1)[0];

  AnsatzParams theta0{};
  switch (v.initial) {
    case InitialTheta::WarmStart:
      theta0 = ansatz_warm_start(c.hamiltonian);
      break;
    case InitialTheta::Random: {
      Rng rng = make_rng(config.seed, "theta");
      for (double& t : theta0) t = (2.0 * uniform01(rng) - 1.0) * std::numbers::pi;
      break;
    }
    case InitialTheta::Explicit:
      theta0 = v.theta;
      break;
  }

  std::ostringstream report;
  report << "exact_energy = " << fmt(run.exact) << '\n';
  VqeTrace trace;
  try {
    trace = optimize(c, theta0);
  } catch (const FitError& e) {
    run.fit_ok = false;
    report << "status = fit failed: " << e.what() << '\n';
    run.files["report.txt"] = report.str();
    return run;
  }
  run.energy = trace.final_energy;
  run.files["trace.csv"] = trace_to_csv(trace, c);
  run.files["trace.json"] = trace_to_json(trace, c) + "\n";
  if (trace.final_fit) {
    run.files["fit.json"] = fit_to_json(*trace.final_fit, run.exact) + "\n";
  } else {
    nlohmann::ordered_json j;
    j["fit"] = nullptr;
    j["energy"] = trace.final_energy;
    j["exact"] = run.exact;
    j["error_ratio_percent"] = error_ratio(trace.final_energy, run.exact);
    run.files["fit.json"] = j.dump(2) + "\n";
    if (c.mitigation.zne && c.variance_steps > 0) run.fit_ok = false;
  }
  const double ratio = error_ratio(trace.final_energy, run.exact);
  report << "final_energy = " << fmt(trace.final_energy) << '\n'
         << "error_ratio_percent = " << fmt(ratio) << '\n'
         << "abs_error_ratio_percent = " << fmt(std::abs(ratio)) << '\n'
         << "converged = " << (trace.converged ? "true" : "false") << '\n'
         << "status = " << trace.status << '\n'
         << "iterations = " << trace.steps.size() << '\n'
         << "energy_evaluations = " << trace.energy_evaluations << '\n'
         << "gradient_evaluations = " << trace.gradient_evaluations << '\n'
         << "executed_shots = " << trace.executed_shots << '\n'
         << "shot_budget = " << shot_budget(trace, c) << '\n';
  run.files["report.txt"] = report.str();
  return run;
}

ZneFitRun cmd_zne_fit(std::string_view csv, double exact) {
  ZneFitRun run;
  const auto points = read_zne_csv(csv);
  std::ostringstream report;
  report << "exact_energy = " << fmt(exact) << '\n' << "points = " << points.size() << '\n';
  try {
    const FitResult fit = zne_fit(points, true);
    run.error_ratio = error_ratio(fit.extrapolated, exact);
    run.files["fit.json"] = fit_to_json(fit, exact) + "\n";
    report << "extrapolated = " << fmt(fit.extrapolated) << '\n'
           << "error_ratio_percent = " << fmt(run.error_ratio) << '\n'
           << "abs_error_ratio_percent = " << fmt(std::abs(run.error_ratio)) << '\n';
  } catch (const FitError& e) {
    run.fit_ok = false;
    report << "status = fit failed: " << e.what() << '\n';
  }
  run.files["report.txt"] = report.str();
  return run;
}

void write_files(const FileMap& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, bytes] : files) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error("failed writing " + path.string());
  }
}

}  // namespace cssim
