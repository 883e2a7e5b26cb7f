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

// Command-line front end: `cssim model|reduce|vqe|zne-fit`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cssim/error.hpp"
#include "cssim/pipeline.hpp"
#include "cssim/random.hpp"

namespace {

constexpr int kExitFitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw cssim::Error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string fixture;
  double exact = -18.0;
};

cssim::PipelineConfig load(const Options& o) {
  cssim::PipelineConfig c =
      o.config_path.empty() ? cssim::default_config() : cssim::parse_config(read_file(o.config_path));
  if (o.seed) {
    c.seed = *o.seed;
    c.vqe.config.seed = cssim::split_seed(c.seed, "vqe");
  }
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  return c;
}

void emit(const cssim::FileMap& files, const std::string& dir) {
  cssim::write_files(files, dir);
  for (const auto& [name, bytes] : files) {
    std::cout << (std::filesystem::path(dir) / name).string() << '\n';
  }
  if (auto it = files.find("report.txt"); it != files.end()) std::cout << it->second;
}

int run_fit(const Options& o, const std::string& dir) {
  const auto r = cssim::cmd_zne_fit(read_file(o.fixture), o.exact);
  emit(r.files, dir);
  return r.fit_ok ? 0 : kExitFitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual-subspace VQE pipeline for small Heisenberg lattices"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration (schema cssim.config/1)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Root seed; overrides the configuration");
    sub->add_option("--out", o.out_dir, "Output directory; overrides the configuration");
  };
  auto* model = app.add_subcommand("model", "Spectrum, phase scan, evolution and mutual information");
  add_common(model);
  auto* reduce = app.add_subcommand("reduce", "Tapering and contextual-subspace reduction");
  add_common(reduce);
  auto* vqe = app.add_subcommand("vqe", "Noisy VQE with readout, symmetry and zero-noise mitigation");
  add_common(vqe);
  vqe->add_option("--fixture", o.fixture, "Fit-only mode on a lambda,energy,sigma table")
      ->check(CLI::ExistingFile);
  vqe->add_option("--exact", o.exact, "Reference energy for fit-only mode");
  auto* fit = app.add_subcommand("zne-fit", "Weighted exponential fit of a lambda,energy,sigma table");
  fit->add_option("--fixture", o.fixture, "Input table")->required()->check(CLI::ExistingFile);
  fit->add_option("--exact", o.exact, "Reference energy");
  fit->add_option("--out", o.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return run_fit(o, o.out_dir.empty() ? "out" : o.out_dir);
    const cssim::PipelineConfig c = load(o);
    if (model->parsed()) {
      emit(cssim::cmd_model(c), c.output_dir);
    } else if (reduce->parsed()) {
      emit(cssim::cmd_reduce(c), c.output_dir);
    } else if (!o.fixture.empty()) {
      return run_fit(o, c.output_dir);
    } else {
      const auto r = cssim::cmd_vqe(c);
      emit(r.files, c.output_dir);
      if (!r.fit_ok) return kExitFitFailed;
    }
  } catch (const cssim::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
