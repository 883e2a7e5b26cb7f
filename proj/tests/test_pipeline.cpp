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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cssim/error.hpp"
#include "cssim/model.hpp"
#include "cssim/pipeline.hpp"
#include "cssim/random.hpp"
#include "fixtures.hpp"

using namespace cssim;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

PipelineConfig load(const std::string& name) {
  return parse_config(read_file(std::filesystem::path(CSSIM_CONFIG_DIR) / name));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string header(const std::string& text) { return text.substr(0, text.find('\n')); }

// Parses `text` and returns the ParseError message, or "" when it parses.
std::string parse_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

double reduced_ground(const FileMap& files) {
  return lowest_eigenvalues(from_text(files.at("reduced_hamiltonian.txt")), 1)[0];
}

// cmd_model on the default Kagome configuration, computed once.
const FileMap& default_model_files() {
  static const FileMap files = cmd_model(load("kagome_default.json"));
  return files;
}

}  // namespace

// ------------------------------------------------------------ config

TEST(Config, MinimalDocumentTakesDefaults) {
  const PipelineConfig c = parse_config(R"({"schema": "cssim.config/1"})");
  EXPECT_EQ(c.seed, 0U);
  EXPECT_EQ(c.model.lattice.n_sites, 12U);
  EXPECT_EQ(c.model.lattice.edges.size(), 18U);
  EXPECT_DOUBLE_EQ(c.model.params.jz, -1.0);
  EXPECT_EQ(c.vqe.config.hamiltonian.simplify(), fixture::h_cs().simplify());
  EXPECT_EQ(c.vqe.config.noise.readout.size(), 5U);
  EXPECT_DOUBLE_EQ(c.vqe.config.noise.two_qubit_depolarizing_p, 0.005);
  EXPECT_EQ(c.vqe.initial, InitialTheta::WarmStart);
}

TEST(Config, BuiltinHamiltonianMatchesIndependentTranscription) {
  EXPECT_EQ(kagome_cs5_hamiltonian().simplify(), fixture::h_cs().simplify());
}

TEST(Config, ShippedConfigsParse) {
  for (const auto& entry : std::filesystem::directory_iterator(CSSIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(parse_config(read_file(entry.path()))) << entry.path();
  }
}

TEST(Config, DefaultFileEqualsBuiltInDefaults) {
  const PipelineConfig a = load("kagome_default.json");
  const PipelineConfig b = default_config();
  EXPECT_EQ(a.vqe.config.hamiltonian, b.vqe.config.hamiltonian);
  EXPECT_EQ(a.vqe.config.lambdas, b.vqe.config.lambdas);
  EXPECT_EQ(a.vqe.config.shots, b.vqe.config.shots);
  EXPECT_EQ(a.vqe.config.seed, b.vqe.config.seed);
  EXPECT_EQ(a.model.scan_h, b.model.scan_h);
  EXPECT_EQ(a.model.parity_sites, b.model.parity_sites);
  EXPECT_EQ(a.reduction.sizes, b.reduction.sizes);
  ASSERT_EQ(a.noise.readout.size(), b.noise.readout.size());
  EXPECT_TRUE(a.noise.readout[0].isApprox(b.noise.readout[0]));
}

TEST(Config, UnknownTopLevelKeyReportsLine) {
  const std::string msg = parse_message("{\n  \"schema\": \"cssim.config/1\",\n  \"sede\": 3\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("sede"), std::string::npos) << msg;
}

TEST(Config, UnknownNestedKeyReportsLine) {
  const std::string text =
      "{\n"
      "  \"schema\": \"cssim.config/1\",\n"
      "  \"vqe\": {\n"
      "    \"shots\": 1024,\n"
      "    \"mitigation\": {\n"
      "      \"rem\": true,\n"
      "      \"readout\": false\n"
      "    }\n"
      "  }\n"
      "}\n";
  const std::string msg = parse_message(text);
  EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
  EXPECT_NE(msg.find("/vqe/mitigation/readout"), std::string::npos) << msg;
}

TEST(Config, SameKeyNameInDifferentSectionsIsResolvedByPath) {
  // "J" is valid under model and under model/phase_scan; "h" is misplaced in noise.
  const std::string text =
      "{\"schema\": \"cssim.config/1\",\n"
      " \"model\": {\"J\": -1, \"h\": 0, \"phase_scan\": {\"J\": [-1], \"h\": [0]}},\n"
      " \"noise\": {\n"
      "   \"h\": 0.1}}";
  const std::string msg = parse_message(text);
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("/noise/h"), std::string::npos) << msg;
}

TEST(Config, TypeAndRangeErrorsReportLine) {
  std::string msg = parse_message("{\"schema\": \"cssim.config/1\",\n\"vqe\": {\n\"shots\": \"many\"}}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  msg = parse_message("{\"schema\": \"cssim.config/1\",\n\n\"noise\": {\"readout_p10\": 1.5}}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  msg = parse_message("{\"schema\": \"cssim.config/1\",\n\"vqe\": {\"lambdas\": [1, 0]}}");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  msg = parse_message("{\"schema\": \"cssim.config/1\",\n\"vqe\": {\"initial_theta\": [1, 2]}}");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrorReportsLine) {
  const std::string msg = parse_message("{\n  \"schema\": \"cssim.config/1\",\n  \"seed\": ,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Config, DuplicateKeyIsRejected) {
  const std::string msg = parse_message("{\"schema\": \"cssim.config/1\",\n\"seed\": 1,\n\"seed\": 2}");
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Config, SchemaIsRequiredAndVersioned) {
  EXPECT_NE(parse_message("{}").find("schema"), std::string::npos);
  EXPECT_NE(parse_message(R"({"schema": "cssim.config/2"})").find("unsupported"), std::string::npos);
}

TEST(Config, CustomLattice) {
  const PipelineConfig c = parse_config(
      R"({"schema": "cssim.config/1", "model": {"lattice": {"n_sites": 4, "edges": [[1, 0], [1, 2], [2, 3]]}}})");
  EXPECT_EQ(c.model.lattice.n_sites, 4U);
  ASSERT_EQ(c.model.lattice.edges.size(), 3U);
  EXPECT_EQ(c.model.lattice.edges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(c.model.parity_sites, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(c.model.initial_bitstring, "0101");
  EXPECT_FALSE(parse_message(R"({"schema": "cssim.config/1",
      "model": {"lattice": {"n_sites": 3, "edges": [[0, 3]]}}})").empty());
  EXPECT_FALSE(parse_message(R"({"schema": "cssim.config/1",
      "model": {"lattice": {"n_sites": 3, "edges": [[0, 1]]}, "evolution": {"initial_bitstring": "0101"}}})")
                   .empty());
}

TEST(Config, InlineHamiltonianTerms) {
  const PipelineConfig c = parse_config(R"({"schema": "cssim.config/1",
      "vqe": {"hamiltonian": {"terms": [["ZIIII", 2.0], ["IXIII", -1.0], ["ZIIII", 1.0]]}}})");
  EXPECT_EQ(c.vqe.config.hamiltonian, PauliSum::from_strings({{"ZIIII", 3.0}, {"IXIII", -1.0}}).simplify());
  EXPECT_FALSE(parse_message(R"({"schema": "cssim.config/1",
      "vqe": {"hamiltonian": {"terms": [["ZIIII", 2.0], ["XII", 1.0]]}}})").empty());
}

TEST(Config, SeedSplitsAreLabelled) {
  const PipelineConfig a = parse_config(R"({"schema": "cssim.config/1", "seed": 5})");
  const PipelineConfig b = parse_config(R"({"schema": "cssim.config/1", "seed": 6})");
  EXPECT_NE(a.vqe.config.seed, b.vqe.config.seed);
  EXPECT_NE(a.vqe.config.seed, 5U);
}

// ------------------------------------------------------------ model

TEST(CmdModel, DefaultKagomeSpectrumStartsAtMinusEighteen) {
  const FileMap& f = default_model_files();
  for (const char* name :
       {"hamiltonian.txt", "spectrum.csv", "phase_scan.csv", "evolution.csv", "mutual_info.csv", "symmetry.json"}) {
    EXPECT_TRUE(f.count(name)) << name;
  }
  EXPECT_EQ(header(f.at("spectrum.csv")), "level,energy");
  const auto rows = csv_rows(f.at("spectrum.csv"));
  ASSERT_EQ(rows.size(), 16U);
  EXPECT_NEAR(std::stod(rows[0][1]), -18.0, 1e-9);
  EXPECT_NEAR(std::stod(rows[1][1]), -18.0, 1e-9);
  EXPECT_GT(std::stod(rows[2][1]), -18.0 + 1e-6);
  EXPECT_EQ(from_text(f.at("hamiltonian.txt")), build_heisenberg(kagome_cell_edges(), ModelParams::xxx(-1, 0)));
}

TEST(CmdModel, PhaseScanEvolutionAndMutualInformationLayouts) {
  const FileMap& f = default_model_files();
  EXPECT_EQ(header(f.at("phase_scan.csv")), "J,h,E0,Mz");
  const auto scan = csv_rows(f.at("phase_scan.csv"));
  ASSERT_EQ(scan.size(), 13U);
  EXPECT_NEAR(std::stod(scan[0][2]), -18.0, 1e-9);

  EXPECT_EQ(header(f.at("evolution.csv")), "t,value");
  const auto evo = csv_rows(f.at("evolution.csv"));
  ASSERT_EQ(evo.size(), 13U);
  // |010101010101> has outer-site parity (+1)(-1)(+1)(-1)(+1)(-1) = -1.
  EXPECT_NEAR(std::stod(evo[0][1]), -1.0, 1e-12);
  for (const auto& r : evo) EXPECT_LE(std::abs(std::stod(r[1])), 1.0 + 1e-12);

  EXPECT_EQ(header(f.at("mutual_info.csv")), "site_i,site_j,mutual_info");
  auto mi = csv_rows(f.at("mutual_info.csv"));
  ASSERT_EQ(mi.size(), 66U);
  std::sort(mi.begin(), mi.end(), [](const auto& a, const auto& b) { return std::stod(a[2]) > std::stod(b[2]); });
  std::set<int> covered;
  for (std::size_t k = 0; k < 6; ++k) {
    covered.insert(std::stoi(mi[k][0]));
    covered.insert(std::stoi(mi[k][1]));
  }
  EXPECT_EQ(covered.size(), 12U);
}

TEST(CmdModel, ZeroFieldReportsTwoSymmetries) {
  EXPECT_NE(default_model_files().at("symmetry.json").find("\"count\": 2"), std::string::npos);
}

TEST(CmdModel, FieldLeavesOneSymmetry) {
  const FileMap f = cmd_model(load("kagome_field.json"));
  const std::string& s = f.at("symmetry.json");
  EXPECT_NE(s.find("\"count\": 1"), std::string::npos) << s;
  EXPECT_NE(s.find("ZZZZZZZZZZZZ"), std::string::npos) << s;
}

TEST(CmdModel, EmptyEdgesGiveZeroHamiltonian) {
  const PipelineConfig c = parse_config(R"({"schema": "cssim.config/1",
      "model": {"lattice": {"n_sites": 4, "edges": []}, "phase_scan": {"J": [-1], "h": [0]},
                "evolution": {"times": [0, 1]}}})");
  const FileMap f = cmd_model(c);
  EXPECT_TRUE(from_text(f.at("hamiltonian.txt")).simplify().empty());
  const auto spec = csv_rows(f.at("spectrum.csv"));
  ASSERT_EQ(spec.size(), 16U);
  for (const auto& r : spec) EXPECT_EQ(std::stod(r[1]), 0.0);
  EXPECT_EQ(std::stod(csv_rows(f.at("phase_scan.csv"))[0][2]), 0.0);
  for (const auto& r : csv_rows(f.at("mutual_info.csv"))) EXPECT_NEAR(std::stod(r[2]), 0.0, 1e-12);
}

// ------------------------------------------------------------ reduce

namespace {

PipelineConfig reduce_config(std::size_t n_cs) {
  PipelineConfig c = default_config();
  c.reduction.n_cs = n_cs;
  c.reduction.sizes = {n_cs};
  c.reduction.spectrum_levels = 2;
  return c;
}

}  // namespace

TEST(CmdReduce, FiveQubitSubspacePreservesGround) {
  const FileMap f = cmd_reduce(reduce_config(5));
  EXPECT_EQ(from_text(f.at("reduced_hamiltonian.txt")).n_qubits(), 5U);
  EXPECT_NEAR(reduced_ground(f), -18.0, 1e-9);
  const SubspaceReduction r = reduction_from_json(f.at("reduction.json"));
  EXPECT_EQ(r.n_reduced(), 5U);
  EXPECT_EQ(r.stabilizers.size(), 5U);
  EXPECT_EQ(reduction_from_json(f.at("taper.json")).stabilizers.size(), 2U);
}

TEST(CmdReduce, TaperOnlyIsIsospectralAtTheGround) {
  const FileMap f = cmd_reduce(reduce_config(10));
  EXPECT_EQ(from_text(f.at("reduced_hamiltonian.txt")).n_qubits(), 10U);
  EXPECT_NEAR(reduced_ground(f), -18.0, 1e-9);
  EXPECT_EQ(reduction_from_json(f.at("reduction.json")).stabilizers.size(), 0U);
}

TEST(CmdReduce, SingleQubitSubspacePreservesGround) {
  const FileMap f = cmd_reduce(reduce_config(1));
  EXPECT_EQ(from_text(f.at("reduced_hamiltonian.txt")).n_qubits(), 1U);
  EXPECT_NEAR(reduced_ground(f), -18.0, 1e-9);
}

TEST(CmdReduce, SpectrumVsSizeLayout) {
  PipelineConfig c = reduce_config(5);
  c.reduction.sizes = {2, 5, 8};
  const FileMap f = cmd_reduce(c);
  EXPECT_EQ(header(f.at("spectrum_vs_size.csv")), "n_qubits,level,energy");
  const auto rows = csv_rows(f.at("spectrum_vs_size.csv"));
  ASSERT_EQ(rows.size(), 8U);  // full register plus three sizes, two levels each
  EXPECT_EQ(rows[0][0], "12");
  for (const auto& r : rows) {
    if (r[1] == "0") EXPECT_NEAR(std::stod(r[2]), -18.0, 1e-9) << r[0];
  }
  EXPECT_EQ(rows[2][0], "8");
  EXPECT_EQ(rows[7][0], "2");
}

TEST(CmdReduce, PerturbedReferenceIsSeeded) {
  PipelineConfig c = reduce_config(4);
  c.reduction.reference = ReferenceSource::Perturbed;
  const FileMap a = cmd_reduce(c);
  const FileMap b = cmd_reduce(c);
  EXPECT_EQ(a, b);
  EXPECT_LT(reduced_ground(a), -18.0 + 0.5);
}

TEST(CmdReduce, RejectsOversizedSubspace) {
  EXPECT_THROW(cmd_reduce(reduce_config(11)), InvalidArgument);
}

// ------------------------------------------------------------ vqe

TEST(CmdVqe, NoiselessRunReachesGround) {
  PipelineConfig c = load("vqe_noiseless.json");
  for (std::uint64_t seed : {1U, 2U}) {
    c.seed = seed;
    const VqeRun run = cmd_vqe(c);
    EXPECT_TRUE(run.fit_ok);
    EXPECT_NEAR(run.energy, -18.0, 1e-6) << "seed " << seed;
    EXPECT_DOUBLE_EQ(run.exact, -18.0);
    for (const char* name : {"trace.csv", "trace.json", "fit.json", "report.txt"}) EXPECT_TRUE(run.files.count(name));
  }
}

namespace {

PipelineConfig short_noisy_config(std::uint64_t seed) {
  PipelineConfig c = parse_config(R"({"schema": "cssim.config/1",
      "vqe": {"shots": 1024, "calibration_shots": 1024, "max_iters": 2, "variance_steps": 3}})");
  c.seed = seed;
  c.vqe.config.seed = split_seed(seed, "vqe");
  return c;
}

}  // namespace

TEST(CmdVqe, FixedSeedIsByteIdentical) {
  const VqeRun a = cmd_vqe(short_noisy_config(11));
  const VqeRun b = cmd_vqe(short_noisy_config(11));
  EXPECT_EQ(a.files, b.files);
  const VqeRun other = cmd_vqe(short_noisy_config(12));
  EXPECT_NE(a.files.at("trace.csv"), other.files.at("trace.csv"));
  EXPECT_NE(a.files.at("fit.json").find("\"extrapolated\""), std::string::npos);
}

TEST(CmdVqe, ReportCarriesBudget) {
  const VqeRun a = cmd_vqe(short_noisy_config(3));
  const std::string& r = a.files.at("report.txt");
  EXPECT_NE(r.find("executed_shots = "), std::string::npos);
  EXPECT_NE(r.find("shot_budget = "), std::string::npos);
}

// ------------------------------------------------------------ zne-fit

TEST(CmdZneFit, HardwareTablesReproduceErrorRatios) {
  const ZneFitRun rem = cmd_zne_fit(read_file(std::filesystem::path(CSSIM_DATA_DIR) / "hardware_rem.csv"), -18.0);
  const ZneFitRun sv = cmd_zne_fit(read_file(std::filesystem::path(CSSIM_DATA_DIR) / "hardware_rem_sv.csv"), -18.0);
  ASSERT_TRUE(rem.fit_ok);
  ASSERT_TRUE(sv.fit_ok);
  EXPECT_NEAR(std::abs(rem.error_ratio), 1.210, 0.3);
  EXPECT_NEAR(std::abs(sv.error_ratio), 0.019, 0.05);
  EXPECT_TRUE(rem.files.count("fit.json"));
}

TEST(CmdZneFit, FailedFitIsReported) {
  const ZneFitRun r = cmd_zne_fit("lambda,energy,sigma\n1,-1.0,0.1\n2,-0.9,0.1\n", -1.0);
  EXPECT_FALSE(r.fit_ok);
  EXPECT_FALSE(r.files.count("fit.json"));
  EXPECT_NE(r.files.at("report.txt").find("fit failed"), std::string::npos);
}

TEST(WriteFiles, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "cssim_write_files_test";
  std::filesystem::remove_all(dir);
  const FileMap files{{"a.txt", "alpha\n"}, {"b.csv", "x,y\n1,2\n"}};
  write_files(files, dir / "nested");
  for (const auto& [name, bytes] : files) EXPECT_EQ(read_file(dir / "nested" / name), bytes);
  std::filesystem::remove_all(dir);
}
