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

#include "maxfs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "maxfs/lp.hpp"
#include "maxfs/metrics.hpp"
#include "maxfs/wav.hpp"

namespace maxfs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    std::string item = trim(s.substr(start, pos - start));
    if (!item.empty()) parts.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      t + "' as a number");
  }
  return value;
}

// libstdc++ 11 has from_chars for double, but keep strtod for clarity of
// accepted syntax (e.g. "1e-6").
template <>
double parse_number<double>(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      t + "' as a number");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = upper(trim(text));
  if (t == "1" || t == "TRUE" || t == "YES" || t == "ON") return true;
  if (t == "0" || t == "FALSE" || t == "NO" || t == "OFF") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected a boolean, got '" +
                    std::string(text) + "'");
}

// "10,20,30" or "10:80:5" (inclusive range) or a mix of both.
std::vector<Index> parse_grid(std::string_view key, std::string_view text) {
  std::vector<Index> grid;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      grid.push_back(parse_number<Index>(key, parts[0]));
    } else if (parts.size() == 3) {
      const Index lo = parse_number<Index>(key, parts[0]);
      const Index hi = parse_number<Index>(key, parts[1]);
      const Index step = parse_number<Index>(key, parts[2]);
      if (step <= 0) throw ConfigError("config key 's_grid': step must be > 0");
      for (Index s = lo; s <= hi; s += step) grid.push_back(s);
    } else {
      throw ConfigError("config key 's_grid': bad item '" + item + "'");
    }
  }
  return grid;
}

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::string to_string(SignalSource source) {
  switch (source) {
    case SignalSource::kLowpass:
      return "synthetic_lowpass";
    case SignalSource::kHighpass:
      return "synthetic_highpass";
    case SignalSource::kWav:
      return "wav";
  }
  return "?";
}

SignalSource parse_signal_source(std::string_view text) {
  const std::string t = upper(trim(text));
  if (t == "SYNTHETIC_LOWPASS" || t == "LOWPASS") return SignalSource::kLowpass;
  if (t == "SYNTHETIC_HIGHPASS" || t == "HIGHPASS") return SignalSource::kHighpass;
  if (t == "WAV" || t == "WAV_PATH") return SignalSource::kWav;
  throw ConfigError("unknown signal_source '" + std::string(text) +
                    "' (expected synthetic_lowpass, synthetic_highpass or wav)");
}

std::vector<Index> ExperimentConfig::default_s_grid() {
  std::vector<Index> grid;
  for (Index s = 10; s <= 80; s += 5) grid.push_back(s);
  return grid;
}

Index ExperimentConfig::m() const {
  return static_cast<Index>(
      std::llround(static_cast<double>(n) * (1.0 - compression_ratio / 100.0)));
}

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(compression_ratio >= 0.0 && compression_ratio < 100.0)) {
    throw ConfigError("compression_ratio must lie in [0, 100)");
  }
  const Index mm = m();
  if (mm < 1 || mm > n) throw ConfigError("compression ratio gives m outside [1, n]");
  if (trials_per_s < 1) throw ConfigError("trials_per_s must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (methods.empty()) throw ConfigError("no methods selected");
  for (const std::string& name : methods) canonical_method(name);
  for (Index s : s_grid) {
    if (s < 1 || s >= mm) {
      throw ConfigError("s_grid value " + std::to_string(s) +
                        " must satisfy 1 <= S < m = " + std::to_string(mm));
    }
    if (signal_source == SignalSource::kLowpass && s > std::min(n, kLowpassBand)) {
      throw ConfigError("s_grid value " + std::to_string(s) +
                        " exceeds the low-pass band");
    }
    if (signal_source == SignalSource::kHighpass && s > n - kLowpassBand) {
      throw ConfigError("s_grid value " + std::to_string(s) +
                        " exceeds the high-pass band");
    }
  }
  if (signal_source == SignalSource::kWav && wav_path.empty()) {
    throw ConfigError("signal_source=wav requires wav_path");
  }
  try {
    maxfs.validate();
    stops.validate();
    irwls.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "n", "compression_ratio", "matrix_kind", "s_grid", "trials_per_s",
      "methods", "seed", "signal_source", "wav_path", "list_length",
      "support_weight", "nonzero_tol", "zero_obj_tol", "max_support",
      "residual_tol", "theta_min", "known_sparsity", "irwls_p",
      "irwls_eps_initial", "irwls_eps_shrink", "irwls_eps_floor",
      "irwls_inner_tol", "irwls_max_outer", "energy_gate", "threads"};
  return k;
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value) {
  const std::string key = trim(key_in);
  const std::string v = trim(value);
  if (key == "n") {
    n = parse_number<Index>(key, v);
  } else if (key == "compression_ratio") {
    compression_ratio = parse_number<double>(key, v);
  } else if (key == "matrix_kind") {
    try {
      matrix_kind = parse_matrix_kind(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "s_grid") {
    s_grid = parse_grid(key, v);
  } else if (key == "trials_per_s") {
    trials_per_s = parse_number<Index>(key, v);
  } else if (key == "methods") {
    methods.clear();
    for (const std::string& m_name : split(v, ',')) methods.push_back(canonical_method(m_name));
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, v);
  } else if (key == "signal_source") {
    signal_source = parse_signal_source(v);
  } else if (key == "wav_path") {
    wav_path = v;
  } else if (key == "list_length") {
    maxfs.list_length = parse_number<Index>(key, v);
  } else if (key == "support_weight") {
    maxfs.support_weight = parse_number<double>(key, v);
  } else if (key == "nonzero_tol") {
    maxfs.nonzero_tol = parse_number<double>(key, v);
  } else if (key == "zero_obj_tol") {
    maxfs.zero_obj_tol = parse_number<double>(key, v);
  } else if (key == "max_support") {
    maxfs.max_support = parse_number<Index>(key, v);
  } else if (key == "residual_tol") {
    stops.residual_tol = parse_number<double>(key, v);
  } else if (key == "theta_min") {
    stops.theta_min = parse_number<double>(key, v);
  } else if (key == "known_sparsity") {
    known_sparsity = parse_bool(key, v);
  } else if (key == "irwls_p") {
    irwls.p = parse_number<double>(key, v);
  } else if (key == "irwls_eps_initial") {
    irwls.eps_initial = parse_number<double>(key, v);
  } else if (key == "irwls_eps_shrink") {
    irwls.eps_shrink = parse_number<double>(key, v);
  } else if (key == "irwls_eps_floor") {
    irwls.eps_floor = parse_number<double>(key, v);
  } else if (key == "irwls_inner_tol") {
    irwls.inner_tol = parse_number<double>(key, v);
  } else if (key == "irwls_max_outer") {
    irwls.max_outer = parse_number<Index>(key, v);
  } else if (key == "energy_gate") {
    energy_gate = parse_bool(key, v);
  } else if (key == "threads") {
    threads = parse_number<Index>(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config(ExperimentConfig& cfg, std::istream& in,
                  const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key=value");
    }
    try {
      cfg.set(t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  apply_config(cfg, in, path);
  return cfg;
}

// ---------------------------------------------------------------------------
// Methods

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names = {"B",   "C",   "M",   "BP",
                                                 "MP",  "OMP", "PFP", "IRWLS"};
  return names;
}

std::string canonical_method(std::string_view name) {
  const std::string up = upper(trim(name));
  const auto& names = known_methods();
  if (std::find(names.begin(), names.end(), up) == names.end()) {
    throw ConfigError("unknown method '" + std::string(name) +
                      "' (expected one of B, C, M, BP, MP, OMP, PFP, IRWLS)");
  }
  return up;
}

RecoveryFn make_method(std::string_view name, const ExperimentConfig& cfg) {
  const std::string id = canonical_method(name);
  const MaxFsConfig mcfg = cfg.maxfs;
  const GreedyStop stops = cfg.stops;
  const bool known = cfg.known_sparsity;
  auto greedy_stop = [stops, known](Index s) {
    GreedyStop g = stops;
    if (known) g.max_sparsity = s;
    return g;
  };
  if (id == "B") {
    return [mcfg](const DenseMatrix& p, const RealVector& y, Index) { return method_b(p, y, mcfg); };
  }
  if (id == "C") {
    return [mcfg](const DenseMatrix& p, const RealVector& y, Index) { return method_c(p, y, mcfg); };
  }
  if (id == "M") {
    return [mcfg](const DenseMatrix& p, const RealVector& y, Index) { return method_m(p, y, mcfg); };
  }
  if (id == "BP") {
    const double tol = mcfg.nonzero_tol;
    return [tol](const DenseMatrix& p, const RealVector& y, Index) { return basis_pursuit(p, y, tol); };
  }
  if (id == "MP") {
    return [greedy_stop](const DenseMatrix& p, const RealVector& y, Index s) {
      return matching_pursuit(p, y, greedy_stop(s));
    };
  }
  if (id == "OMP") {
    return [greedy_stop](const DenseMatrix& p, const RealVector& y, Index s) {
      return omp(p, y, greedy_stop(s));
    };
  }
  if (id == "PFP") {
    return [greedy_stop](const DenseMatrix& p, const RealVector& y, Index s) {
      return pfp(p, y, greedy_stop(s));
    };
  }
  const IrwlsConfig icfg = cfg.irwls;
  return [icfg](const DenseMatrix& p, const RealVector& y, Index) { return irwls(p, y, icfg); };
}

std::vector<MethodColumn> make_methods(const ExperimentConfig& cfg) {
  std::vector<MethodColumn> cols;
  for (const std::string& name : cfg.methods) {
    cols.push_back({canonical_method(name), make_method(name, cfg)});
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Sweeps

std::uint64_t trial_seed(std::uint64_t seed, Index s, Index trial) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(s));
  return mix(h ^ static_cast<std::uint64_t>(trial));
}

RealVector synthetic_input(SignalSource source, Index n, Index s,
                           std::mt19937_64& rng) {
  Index lo = 0, hi = std::min(n, kLowpassBand);
  if (source == SignalSource::kHighpass) {
    lo = std::min(n, kLowpassBand);
    hi = n;
  } else if (source != SignalSource::kLowpass) {
    throw std::invalid_argument("synthetic_input: not a synthetic source");
  }
  if (s < 0 || s > hi - lo) {
    throw std::invalid_argument("synthetic_input: S exceeds the band width");
  }
  std::vector<Index> band(static_cast<std::size_t>(hi - lo));
  std::iota(band.begin(), band.end(), lo);
  // Partial Fisher-Yates with explicit draws so the result depends only on
  // the engine, not on library shuffle details.
  for (Index k = 0; k < s; ++k) {
    const auto span = static_cast<std::uint64_t>(band.size()) - static_cast<std::uint64_t>(k);
    const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(rng() % span);
    std::swap(band[static_cast<std::size_t>(k)], band[pick]);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealVector a = RealVector::Zero(n);
  for (Index k = 0; k < s; ++k) {
    double v = gauss(rng);
    while (std::abs(v) <= kNonzeroTol) v = gauss(rng);
    a[band[static_cast<std::size_t>(k)]] = v;
  }
  return a;
}

namespace {

// Keeps the s largest-magnitude entries (lowest index first on ties).
RealVector keep_largest(const RealVector& a, Index s) {
  std::vector<Index> order(static_cast<std::size_t>(a.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) {
    return std::abs(a[l]) > std::abs(a[r]);
  });
  RealVector out = RealVector::Zero(a.size());
  for (Index k = 0; k < s && k < a.size(); ++k) {
    out[order[static_cast<std::size_t>(k)]] = a[order[static_cast<std::size_t>(k)]];
  }
  return out;
}

struct SpeechFrames {
  std::vector<RealVector> dct;  // voiced frames only
};

SpeechFrames load_speech_frames(const ExperimentConfig& cfg) {
  const WavData wav = read_wav(cfg.wav_path);
  const auto segs = segment(wav.samples, cfg.n);
  const auto voiced = energy_gate(segs, rms(wav.samples));
  SpeechFrames frames;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (voiced[k]) frames.dct.push_back(dct_forward(segs[k].samples));
  }
  if (frames.dct.empty()) throw std::runtime_error(cfg.wav_path + ": no voiced frames");
  return frames;
}

SweepInstance build_instance(const ExperimentConfig& cfg, const SpeechFrames& speech,
                             Index s, Index trial) {
  const std::uint64_t tseed = trial_seed(cfg.seed, s, trial);
  std::mt19937_64 rng(tseed);
  SweepInstance inst;
  if (cfg.signal_source == SignalSource::kWav) {
    const std::size_t pick = static_cast<std::size_t>(rng() % speech.dct.size());
    inst.a = keep_largest(speech.dct[pick], s);
  } else {
    inst.a = synthetic_input(cfg.signal_source, cfg.n, s, rng);
  }
  inst.phi = measurement_matrix({cfg.matrix_kind, cfg.m(), cfg.n, mix(tseed)});
  inst.y = compress(inst.phi, inst.a);
  return inst;
}

}  // namespace

SweepInstance sweep_instance(const ExperimentConfig& cfg, Index s, Index trial) {
  cfg.validate();
  SpeechFrames speech;
  if (cfg.signal_source == SignalSource::kWav) speech = load_speech_frames(cfg);
  return build_instance(cfg, speech, s, trial);
}

SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<MethodColumn>& methods) {
  cfg.validate();
  if (methods.empty()) throw ConfigError("no methods selected");
  const Index m = cfg.m();
  const Index num_methods = static_cast<Index>(methods.size());
  const Index num_s = static_cast<Index>(cfg.s_grid.size());
  const Index num_jobs = num_s * cfg.trials_per_s;

  SpeechFrames speech;
  if (cfg.signal_source == SignalSource::kWav) speech = load_speech_frames(cfg);

  SweepResult result;
  result.m = m;
  result.trials_per_s = cfg.trials_per_s;
  for (const auto& col : methods) result.methods.push_back(col.name);
  result.trials.resize(static_cast<std::size_t>(num_jobs * num_methods));

  auto run_job = [&](Index job) {
    const Index si = job / cfg.trials_per_s, trial = job % cfg.trials_per_s;
    const Index s = cfg.s_grid[static_cast<std::size_t>(si)];
    const SweepInstance inst = build_instance(cfg, speech, s, trial);
    const DenseMatrix& phi = inst.phi;
    const RealVector& y = inst.y;
    const Index s_true = t_sparsity(inst.a);
    const double ynorm = y.cwiseAbs().maxCoeff();
    for (Index k = 0; k < num_methods; ++k) {
      SweepTrial& rec = result.trials[static_cast<std::size_t>(job * num_methods + k)];
      rec.s = s;
      rec.trial = trial;
      rec.method = methods[static_cast<std::size_t>(k)].name;
      const auto t0 = Clock::now();
      try {
        const RecoveryResult r = methods[static_cast<std::size_t>(k)].fn(phi, y, s_true);
        rec.t = r.t_sparsity;
        rec.feasibility = (phi * r.x - y).cwiseAbs().maxCoeff() / (1.0 + ynorm);
        rec.lp_solves = r.stats.lp_solves;
        rec.success = is_success(r.t_sparsity, s_true) && rec.feasibility <= 1e-6;
      } catch (const std::exception& e) {
        rec.t = m;
        rec.success = false;
        rec.feasibility = std::numeric_limits<double>::quiet_NaN();
        rec.error = e.what();
      }
      rec.seconds = seconds_since(t0);
    }
  };

  Index workers = cfg.threads == 0
                      ? static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()))
                      : cfg.threads;
  workers = std::min(workers, num_jobs);
  if (workers <= 1) {
    for (Index job = 0; job < num_jobs; ++job) run_job(job);
  } else {
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (Index job = next++; job < num_jobs; job = next++) {
          try {
            run_job(job);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  result.summary.resize(static_cast<std::size_t>(num_methods));
  std::vector<std::vector<double>> t_avgs(static_cast<std::size_t>(num_methods));
  for (Index si = 0; si < num_s; ++si) {
    SweepRow row;
    row.s = cfg.s_grid[static_cast<std::size_t>(si)];
    row.cells.resize(static_cast<std::size_t>(num_methods));
    for (Index trial = 0; trial < cfg.trials_per_s; ++trial) {
      for (Index k = 0; k < num_methods; ++k) {
        const SweepTrial& rec = result.trials[static_cast<std::size_t>(
            (si * cfg.trials_per_s + trial) * num_methods + k)];
        SweepCell& cell = row.cells[static_cast<std::size_t>(k)];
        cell.t_avg += static_cast<double>(rec.t);
        cell.successes += rec.success ? 1 : 0;
        MethodSummary& sum = result.summary[static_cast<std::size_t>(k)];
        sum.lp_solves += rec.lp_solves;
        sum.errors += rec.error.empty() ? 0 : 1;
        sum.seconds += rec.seconds;
      }
    }
    for (Index k = 0; k < num_methods; ++k) {
      SweepCell& cell = row.cells[static_cast<std::size_t>(k)];
      cell.t_avg /= static_cast<double>(cfg.trials_per_s);
      MethodSummary& sum = result.summary[static_cast<std::size_t>(k)];
      sum.total_successes += cell.successes;
      if (cell.successes == cfg.trials_per_s &&
          (!sum.largest_full_s || row.s > *sum.largest_full_s)) {
        sum.largest_full_s = row.s;
      }
      t_avgs[static_cast<std::size_t>(k)].push_back(cell.t_avg);
    }
    result.rows.push_back(std::move(row));
  }
  for (Index k = 0; k < num_methods; ++k) {
    MethodSummary& sum = result.summary[static_cast<std::size_t>(k)];
    if (sum.largest_full_s) {
      sum.min_m_ratio = static_cast<double>(m) / static_cast<double>(*sum.largest_full_s);
    }
    const auto& avgs = t_avgs[static_cast<std::size_t>(k)];
    if (!avgs.empty() &&
        std::all_of(avgs.begin(), avgs.end(), [](double v) { return v > 0.0; })) {
      sum.gm = geometric_mean(avgs);
    }
  }
  return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_sweep(cfg, make_methods(cfg));
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "S";
  for (const auto& name : result.methods) out << ',' << name << "_T_avg," << name << "_succ";
  out << '\n';
  for (const SweepRow& row : result.rows) {
    out << row.s;
    for (const SweepCell& cell : row.cells) {
      out << ',' << format_double(cell.t_avg, 2) << ',' << cell.successes;
    }
    out << '\n';
  }
  out << "TOT_SUCC";
  for (const auto& sum : result.summary) out << ',' << sum.total_successes << ',';
  out << "\nMIN_M";
  for (const auto& sum : result.summary) {
    out << ',' << (sum.min_m_ratio ? format_double(*sum.min_m_ratio, 2) : "FAIL") << ',';
  }
  out << "\nGM";
  for (const auto& sum : result.summary) {
    out << ',' << (sum.gm ? format_double(*sum.gm, 2) : "NA") << ',';
  }
  out << '\n';
}

void write_sweep_log(std::ostream& out, const SweepResult& result) {
  for (std::size_t k = 0; k < result.methods.size(); ++k) {
    const MethodSummary& sum = result.summary[k];
    out << result.methods[k] << ": lp_solves=" << sum.lp_solves
        << " errors=" << sum.errors << " seconds=" << format_double(sum.seconds, 2)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// WAV codec

DenseMatrix codec_matrix(Index m, Index n, MatrixKind kind, std::uint64_t seed) {
  if (m == n) return DenseMatrix::Identity(n, n);
  return measurement_matrix({kind, m, n, seed});
}

CompressedSignal compress_signal(const RealVector& samples,
                                 std::uint32_t sample_rate,
                                 const ExperimentConfig& cfg) {
  CompressedSignal cs;
  cs.n = cfg.n;
  cs.m = cfg.m();
  if (cs.m < 1 || cs.m > cs.n) throw ConfigError("compression ratio gives m outside [1, n]");
  cs.matrix_kind = cfg.matrix_kind;
  cs.seed = cfg.seed;
  cs.sample_rate = sample_rate;
  cs.num_samples = samples.size();
  const auto segs = segment(samples, cfg.n);
  std::vector<bool> voiced(segs.size(), true);
  if (cfg.energy_gate) {
    voiced = energy_gate(segs, rms(samples));
    if (std::none_of(voiced.begin(), voiced.end(), [](bool v) { return v; })) {
      throw std::runtime_error("no voiced frames");
    }
  }
  const DenseMatrix phi = codec_matrix(cs.m, cs.n, cs.matrix_kind, cs.seed);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    CompressedSegment seg;
    seg.index = segs[k].index;
    seg.voiced = voiced[k];
    if (seg.voiced) {
      const SparsifiedSegment sp = sparsify(dct_forward(segs[k].samples));
      seg.s = sp.s_sparsity;
      seg.y = compress(phi, sp.coeffs);
    }
    cs.segments.push_back(std::move(seg));
  }
  return cs;
}

void write_compressed(std::ostream& out, const CompressedSignal& cs) {
  out << "format=maxfs-cs-1\n"
      << "n=" << cs.n << '\n'
      << "m=" << cs.m << '\n'
      << "matrix_kind=" << to_string(cs.matrix_kind) << '\n'
      << "seed=" << cs.seed << '\n'
      << "sample_rate=" << cs.sample_rate << '\n'
      << "num_samples=" << cs.num_samples << '\n'
      << "segments=" << cs.segments.size() << '\n';
  char buf[40];
  for (const CompressedSegment& seg : cs.segments) {
    out << seg.index << ' ' << (seg.voiced ? 1 : 0) << ' ' << seg.s;
    for (Index i = 0; i < seg.y.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", seg.y[i]);
      out << buf;
    }
    out << '\n';
  }
}

CompressedSignal read_compressed(std::istream& in) {
  CompressedSignal cs;
  std::string line;
  Index expected = -1;
  bool format_ok = false;
  auto header_int = [](const std::string& key, const std::string& v) {
    return parse_number<long long>(key, v);
  };
  while (expected < 0 && std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("compressed file: bad header line '" + line + "'");
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (key == "format") {
      if (v != "maxfs-cs-1") throw std::runtime_error("compressed file: unsupported format '" + v + "'");
      format_ok = true;
    } else if (key == "n") {
      cs.n = header_int(key, v);
    } else if (key == "m") {
      cs.m = header_int(key, v);
    } else if (key == "matrix_kind") {
      cs.matrix_kind = parse_matrix_kind(v);
    } else if (key == "seed") {
      cs.seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "sample_rate") {
      cs.sample_rate = static_cast<std::uint32_t>(header_int(key, v));
    } else if (key == "num_samples") {
      cs.num_samples = header_int(key, v);
    } else if (key == "segments") {
      expected = header_int(key, v);
    } else {
      throw std::runtime_error("compressed file: unknown header key '" + key + "'");
    }
  }
  if (!format_ok || expected < 0 || cs.n < 1 || cs.m < 1 || cs.m > cs.n) {
    throw std::runtime_error("compressed file: incomplete or invalid header");
  }
  for (Index k = 0; k < expected; ++k) {
    if (!std::getline(in, line)) throw std::runtime_error("compressed file: truncated segment list");
    std::istringstream ls(line);
    CompressedSegment seg;
    int voiced = 0;
    if (!(ls >> seg.index >> voiced >> seg.s)) {
      throw std::runtime_error("compressed file: bad segment line " + std::to_string(k));
    }
    seg.voiced = voiced != 0;
    if (seg.voiced) {
      seg.y.resize(cs.m);
      for (Index i = 0; i < cs.m; ++i) {
        if (!(ls >> seg.y[i])) {
          throw std::runtime_error("compressed file: segment " + std::to_string(k) +
                                   " has fewer than m values");
        }
      }
    }
    cs.segments.push_back(std::move(seg));
  }
  return cs;
}

RecoverReport recover_signal(const CompressedSignal& cs,
                             const std::string& out_path,
                             const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw ConfigError("no methods selected");
  const auto t0 = Clock::now();
  RecoverReport rep;
  rep.method = canonical_method(cfg.methods.front());
  rep.m = cs.m;
  rep.n = cs.n;
  const RecoveryFn fn = make_method(rep.method, cfg);
  const DenseMatrix phi = codec_matrix(cs.m, cs.n, cs.matrix_kind, cs.seed);
  std::vector<std::pair<Index, RealVector>> coeffs;
  for (const CompressedSegment& seg : cs.segments) {
    SegmentReport sr;
    sr.index = seg.index;
    sr.voiced = seg.voiced;
    sr.s = seg.s;
    const auto ts = Clock::now();
    RealVector x = RealVector::Zero(cs.n);
    if (seg.voiced) {
      const RecoveryResult r = fn(phi, seg.y, seg.s);
      x = r.x;
      sr.t = r.t_sparsity;
      sr.lp_solves = r.stats.lp_solves;
    }
    sr.seconds = seconds_since(ts);
    rep.segments.push_back(sr);
    coeffs.emplace_back(seg.index, std::move(x));
  }
  const Index total = static_cast<Index>(cs.segments.size()) * cs.n;
  const Index pad = total - cs.num_samples;
  rep.signal = quantize_pcm16(reconstruct(std::move(coeffs), pad));
  write_wav(out_path, rep.signal, cs.sample_rate);
  rep.seconds = seconds_since(t0);
  return rep;
}

RecoverReport run_recover_wav(const std::string& in_path,
                              const std::string& out_path,
                              const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const WavData wav = read_wav(in_path);
  if (wav.samples.size() == 0) throw WavError(in_path + ": no samples");
  const CompressedSignal cs = compress_signal(wav.samples, wav.sample_rate, cfg);
  RecoverReport rep = recover_signal(cs, out_path, cfg);
  rep.rse = rse(rep.signal, wav.samples);
  rep.seconds = seconds_since(t0);
  return rep;
}

void write_segment_csv(std::ostream& out, const RecoverReport& report) {
  out << "segment,voiced,S,T,lp_solves\n";
  for (const SegmentReport& s : report.segments) {
    out << s.index << ',' << (s.voiced ? 1 : 0) << ',' << s.s << ',' << s.t << ','
        << s.lp_solves << '\n';
  }
}

void write_recover_summary(std::ostream& out, const RecoverReport& report) {
  Index voiced = 0, exact = 0;
  for (const SegmentReport& s : report.segments) {
    if (!s.voiced) continue;
    ++voiced;
    exact += s.s == s.t ? 1 : 0;
  }
  char buf[64];
  out << "method=" << report.method << " n=" << report.n << " m=" << report.m
      << " segments=" << report.segments.size() << " voiced=" << voiced
      << " T_equals_S=" << exact << '\n';
  if (report.rse) {
    std::snprintf(buf, sizeof buf, "%.6e", *report.rse);
    out << "rse=" << buf << '\n';
  }
  out << "seconds=" << format_double(report.seconds, 3) << '\n';
}

// ---------------------------------------------------------------------------
// Oracle files

DenseMatrix read_matrix(std::istream& in, const std::string& origin) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw std::runtime_error(origin + ": expected 'rows cols' header with positive sizes");
  }
  DenseMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> a(i, j))) {
        throw std::runtime_error(origin + ": expected " + std::to_string(rows * cols) +
                                 " numbers, read " + std::to_string(i * cols + j));
      }
    }
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error(origin + ": trailing data '" + extra + "'");
  require_finite(a, origin.c_str());
  return a;
}

DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_matrix(in, path);
}

oracle::OracleResult run_oracle(const std::string& phi_path,
                                const std::string& y_path, Index max_card) {
  const DenseMatrix phi = read_matrix_file(phi_path);
  const DenseMatrix ym = read_matrix_file(y_path);
  if (ym.rows() != 1 && ym.cols() != 1) {
    throw std::runtime_error(y_path + ": y must be a single row or column");
  }
  const RealVector y = ym.reshaped();
  return oracle::min_support_exact(phi, y, max_card);
}

void write_oracle_result(std::ostream& out, const oracle::OracleResult& r) {
  out << "min_cardinality=" << r.min_cardinality << "\nwitness=";
  for (std::size_t k = 0; k < r.witness_support.size(); ++k) {
    out << (k ? "," : "") << r.witness_support[k];
  }
  out << "\nunique=" << (r.unique ? "true" : "false") << "\nx=";
  char buf[40];
  for (Index j = 0; j < r.witness_x.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%s%.17g", j ? " " : "", r.witness_x[j]);
    out << buf;
  }
  out << '\n';
}

}  // namespace maxfs
