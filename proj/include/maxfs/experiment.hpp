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

// Experiment harness behind the command-line tool: configuration, recovery
// method registry, critical-sparsity sweeps and the WAV codec path.

#ifndef MAXFS_EXPERIMENT_HPP_
#define MAXFS_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maxfs/baselines.hpp"
#include "maxfs/maxfs.hpp"
#include "maxfs/oracle.hpp"
#include "maxfs/pipeline.hpp"

namespace maxfs {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SignalSource { kLowpass, kHighpass, kWav };

std::string to_string(SignalSource source);
SignalSource parse_signal_source(std::string_view text);

/// Synthetic inputs draw their support from DCT indices below this bound
/// (low-pass) or at and above it (high-pass).
inline constexpr Index kLowpassBand = 100;

struct ExperimentConfig {
  Index n = kDefaultFrameLength;
  /// Percent; m = round(n * (1 - CR / 100)).
  double compression_ratio = 50.0;
  MatrixKind matrix_kind = MatrixKind::kRgm;
  std::vector<Index> s_grid = default_s_grid();
  Index trials_per_s = 10;
  std::vector<std::string> methods = {"B", "C", "M", "BP", "MP", "OMP", "PFP", "IRWLS"};
  std::uint64_t seed = 1;
  SignalSource signal_source = SignalSource::kLowpass;
  std::string wav_path;
  MaxFsConfig maxfs;
  GreedyStop stops;
  IrwlsConfig irwls;
  /// Hand the true S to MP/OMP/PFP as max_sparsity.
  bool known_sparsity = false;
  bool energy_gate = false;
  /// Worker threads for sweeps; 0 means one per hardware thread.
  Index threads = 1;

  Index m() const;
  void validate() const;
  /// Sets one field from its key=value form. Throws ConfigError.
  void set(std::string_view key, std::string_view value);

  static std::vector<Index> default_s_grid();
  static const std::vector<std::string>& keys();
};

/// Flat key=value lines; '#' starts a comment; blank lines ignored.
void apply_config(ExperimentConfig& cfg, std::istream& in,
                  const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Methods

/// (phi, y, true S) -> result. S is only used by methods configured to take
/// it.
using RecoveryFn =
    std::function<RecoveryResult(const DenseMatrix&, const RealVector&, Index)>;

struct MethodColumn {
  std::string name;
  RecoveryFn fn;
};

const std::vector<std::string>& known_methods();
/// Upper-cases and checks against known_methods(). Throws ConfigError.
std::string canonical_method(std::string_view name);
RecoveryFn make_method(std::string_view name, const ExperimentConfig& cfg);
std::vector<MethodColumn> make_methods(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Sweeps

std::uint64_t trial_seed(std::uint64_t seed, Index s, Index trial);

/// S-sparse DCT-domain input with standard Gaussian values.
RealVector synthetic_input(SignalSource source, Index n, Index s,
                           std::mt19937_64& rng);

/// One sweep instance: input coefficients, matrix and measurements.
struct SweepInstance {
  RealVector a;
  DenseMatrix phi;
  RealVector y;
};

/// Rebuilds exactly the instance run_sweep uses for (S, trial).
SweepInstance sweep_instance(const ExperimentConfig& cfg, Index s, Index trial);

struct SweepTrial {
  Index s = 0;
  Index trial = 0;
  std::string method;
  Index t = 0;
  bool success = false;
  /// ||phi x - y||_inf / (1 + ||y||_inf)
  double feasibility = 0.0;
  Index lp_solves = 0;
  double seconds = 0.0;
  /// Non-empty when the method threw; t is then reported as m.
  std::string error;
};

struct SweepCell {
  double t_avg = 0.0;
  Index successes = 0;
};

struct SweepRow {
  Index s = 0;
  std::vector<SweepCell> cells;  // one per method
};

struct MethodSummary {
  Index total_successes = 0;
  /// m / (largest S with every trial successful).
  std::optional<double> min_m_ratio;
  std::optional<Index> largest_full_s;
  /// Geometric mean of the T averages; empty if any average is 0.
  std::optional<double> gm;
  Index lp_solves = 0;
  Index errors = 0;
  double seconds = 0.0;
};

struct SweepResult {
  Index m = 0;
  Index trials_per_s = 0;
  std::vector<std::string> methods;
  std::vector<SweepRow> rows;
  std::vector<MethodSummary> summary;
  /// Ordered by (S, trial, method column).
  std::vector<SweepTrial> trials;
};

SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<MethodColumn>& methods);
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Header "S,<m>_T_avg,<m>_succ,...", one row per S, then TOT_SUCC, MIN_M
/// and GM rows carrying each method's value in its _T_avg column.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_sweep_log(std::ostream& out, const SweepResult& result);

// ---------------------------------------------------------------------------
// WAV codec

struct CompressedSegment {
  Index index = 0;
  bool voiced = true;
  Index s = 0;
  RealVector y;
};

struct CompressedSignal {
  Index n = 0;
  Index m = 0;
  MatrixKind matrix_kind = MatrixKind::kRgm;
  std::uint64_t seed = 0;
  std::uint32_t sample_rate = 0;
  Index num_samples = 0;
  std::vector<CompressedSegment> segments;
};

/// Identity when m = n, otherwise measurement_matrix for the signal's spec.
DenseMatrix codec_matrix(Index m, Index n, MatrixKind kind, std::uint64_t seed);

CompressedSignal compress_signal(const RealVector& samples,
                                 std::uint32_t sample_rate,
                                 const ExperimentConfig& cfg);
void write_compressed(std::ostream& out, const CompressedSignal& cs);
CompressedSignal read_compressed(std::istream& in);

struct SegmentReport {
  Index index = 0;
  bool voiced = true;
  Index s = 0;
  Index t = 0;
  Index lp_solves = 0;
  double seconds = 0.0;
};

struct RecoverReport {
  std::string method;
  Index m = 0;
  Index n = 0;
  std::vector<SegmentReport> segments;
  /// Recovered signal as written (after 16-bit quantization).
  RealVector signal;
  /// Against the input WAV; absent when recovering from a compressed file.
  std::optional<double> rse;
  double seconds = 0.0;
};

/// Recovers with cfg.methods.front() and writes a WAV to out_path.
RecoverReport recover_signal(const CompressedSignal& cs,
                             const std::string& out_path,
                             const ExperimentConfig& cfg);
RecoverReport run_recover_wav(const std::string& in_path,
                              const std::string& out_path,
                              const ExperimentConfig& cfg);
void write_segment_csv(std::ostream& out, const RecoverReport& report);
void write_recover_summary(std::ostream& out, const RecoverReport& report);

// ---------------------------------------------------------------------------
// Oracle files

/// "rows cols" then rows*cols row-major numbers.
DenseMatrix read_matrix(std::istream& in, const std::string& origin);
DenseMatrix read_matrix_file(const std::string& path);

oracle::OracleResult run_oracle(const std::string& phi_path,
                                const std::string& y_path, Index max_card);
void write_oracle_result(std::ostream& out, const oracle::OracleResult& r);

}  // namespace maxfs

#endif  // MAXFS_EXPERIMENT_HPP_
