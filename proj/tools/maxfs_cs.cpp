// Copyright 2026 The maxfs-cs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: sweep, recover, compress, oracle.
// Exit status: 0 success, 1 usage error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "maxfs/experiment.hpp"
#include "maxfs/wav.hpp"

namespace {

using maxfs::ExperimentConfig;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_config_flags(CLI::App& cmd, ConfigFlags& flags) {
  cmd.add_option("--config", flags.config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  for (const std::string& key : ExperimentConfig::keys()) {
    flags.options[key] = cmd.add_option("--" + key, flags.values[key], "config key " + key);
  }
}

// Defaults, then the config file, then flags given on the command line.
ExperimentConfig resolve_config(const ConfigFlags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = maxfs::load_config(flags.config_path);
  for (const std::string& key : ExperimentConfig::keys()) {
    if (flags.options.at(key)->count() > 0) {
      try {
        cfg.set(key, flags.values.at(key));
      } catch (const maxfs::ConfigError& e) {
        throw maxfs::ConfigError(std::string("--") + e.what());
      }
    }
  }
  return cfg;
}

bool looks_like_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string(magic, 4) == "RIFF";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

int run_sweep_cmd(const ConfigFlags& flags, const std::string& out_path) {
  const ExperimentConfig cfg = resolve_config(flags);
  cfg.validate();
  const maxfs::SweepResult result = maxfs::run_sweep(cfg);
  if (out_path.empty() || out_path == "-") {
    maxfs::write_sweep_csv(std::cout, result);
  } else {
    std::ofstream out = open_out(out_path);
    maxfs::write_sweep_csv(out, result);
    finish(out, out_path);
  }
  maxfs::write_sweep_log(std::cerr, result);
  return 0;
}

int run_compress_cmd(const ConfigFlags& flags, const std::string& in_path,
                     const std::string& out_path) {
  const ExperimentConfig cfg = resolve_config(flags);
  const maxfs::WavData wav = maxfs::read_wav(in_path);
  const maxfs::CompressedSignal cs = maxfs::compress_signal(wav.samples, wav.sample_rate, cfg);
  std::ofstream out = open_out(out_path);
  maxfs::write_compressed(out, cs);
  finish(out, out_path);
  std::cout << "segments=" << cs.segments.size() << " n=" << cs.n << " m=" << cs.m
            << " matrix_kind=" << maxfs::to_string(cs.matrix_kind) << " seed=" << cs.seed
            << '\n';
  return 0;
}

int run_recover_cmd(const ConfigFlags& flags, const std::string& in_path,
                    const std::string& out_path) {
  const ExperimentConfig cfg = resolve_config(flags);
  maxfs::RecoverReport rep;
  if (looks_like_wav(in_path)) {
    rep = maxfs::run_recover_wav(in_path, out_path, cfg);
  } else {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
    rep = maxfs::recover_signal(maxfs::read_compressed(in), out_path, cfg);
  }
  const std::string seg_path = out_path + ".segments.csv";
  std::ofstream seg = open_out(seg_path);
  maxfs::write_segment_csv(seg, rep);
  finish(seg, seg_path);
  maxfs::write_recover_summary(std::cout, rep);
  return 0;
}

int run_oracle_cmd(const std::string& phi_path, const std::string& y_path,
                   maxfs::Index max_card, const std::string& out_path) {
  const maxfs::oracle::OracleResult r = maxfs::run_oracle(phi_path, y_path, max_card);
  if (out_path.empty() || out_path == "-") {
    maxfs::write_oracle_result(std::cout, r);
  } else {
    std::ofstream out = open_out(out_path);
    maxfs::write_oracle_result(out, r);
    finish(out, out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery experiments for compressive sensing of audio"};
  app.require_subcommand(1);

  ConfigFlags sweep_flags, recover_flags, compress_flags;
  std::string sweep_out, recover_in, recover_out, compress_in, compress_out;
  std::string phi_path, y_path, oracle_out;
  maxfs::Index max_card = 0;

  CLI::App* sweep = app.add_subcommand("sweep", "Critical-sparsity sweep; CSV to --out or stdout");
  add_config_flags(*sweep, sweep_flags);
  sweep->add_option("--out", sweep_out, "CSV path ('-' for stdout)");

  CLI::App* recover = app.add_subcommand(
      "recover", "Recover a WAV, or a file written by compress, with the first of --methods");
  add_config_flags(*recover, recover_flags);
  recover->add_option("input", recover_in, "16-bit PCM mono WAV or compressed file")
      ->required()
      ->check(CLI::ExistingFile);
  recover->add_option("--out", recover_out, "recovered WAV path")->required();

  CLI::App* compress = app.add_subcommand(
      "compress", "Write per-frame measurements and the matrix seed to a text file");
  add_config_flags(*compress, compress_flags);
  compress->add_option("input", compress_in, "16-bit PCM mono WAV")
      ->required()
      ->check(CLI::ExistingFile);
  compress->add_option("--out", compress_out, "compressed output path")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive minimum-support search");
  oracle->add_option("--phi", phi_path, "matrix file: 'rows cols' then row-major values")
      ->required()
      ->check(CLI::ExistingFile);
  oracle->add_option("--y", y_path, "measurement vector file, same format")
      ->required()
      ->check(CLI::ExistingFile);
  oracle->add_option("--max-card", max_card, "largest support size to try")
      ->required()
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--out", oracle_out, "result path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*sweep) return run_sweep_cmd(sweep_flags, sweep_out);
    if (*recover) return run_recover_cmd(recover_flags, recover_in, recover_out);
    if (*compress) return run_compress_cmd(compress_flags, compress_in, compress_out);
    if (*oracle) return run_oracle_cmd(phi_path, y_path, max_card, oracle_out);
  } catch (const maxfs::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
