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

#include "maxfs/pipeline.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace maxfs {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// created once per (kind, length) and never destroyed.
fftw_plan dct_plan(fftw_r2r_kind kind, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto& plan = plans[{static_cast<int>(kind), n}];
  if (plan == nullptr) {
    std::vector<double> in(static_cast<std::size_t>(n)), out(in.size());
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), kind,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
  }
  return plan;
}

RealVector run_r2r(fftw_r2r_kind kind, RealVector in) {
  RealVector out(in.size());
  if (in.size() == 0) return out;
  fftw_execute_r2r(dct_plan(kind, static_cast<int>(in.size())), in.data(),
                   out.data());
  return out;
}

}  // namespace

std::string to_string(MatrixKind kind) {
  return kind == MatrixKind::kRgm ? "RGM" : "RNM";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  std::string up(text);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "RGM") return MatrixKind::kRgm;
  if (up == "RNM") return MatrixKind::kRnm;
  throw std::invalid_argument("unknown matrix kind '" + std::string(text) +
                              "' (expected RGM or RNM)");
}

std::vector<Segment> segment(const RealVector& signal, Index n) {
  if (n < 1) throw std::invalid_argument("segment: frame length must be >= 1");
  if (signal.size() == 0) throw std::invalid_argument("segment: empty signal");
  const Index count = (signal.size() + n - 1) / n;
  std::vector<Segment> out(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    Segment& s = out[static_cast<std::size_t>(k)];
    s.index = k;
    s.samples = RealVector::Zero(n);
    const Index len = std::min(n, signal.size() - k * n);
    s.samples.head(len) = signal.segment(k * n, len);
    s.pad_len = n - len;
  }
  return out;
}

RealVector dct_forward(const RealVector& f) {
  const Index n = f.size();
  RealVector a = run_r2r(FFTW_REDFT10, f);
  if (n == 0) return a;
  a *= 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  a[0] /= std::sqrt(2.0);
  return a;
}

RealVector dct_inverse(const RealVector& a) {
  const Index n = a.size();
  if (n == 0) return a;
  RealVector in = a / std::sqrt(2.0 * static_cast<double>(n));
  in[0] = a[0] / std::sqrt(static_cast<double>(n));
  return run_r2r(FFTW_REDFT01, std::move(in));
}

DenseMatrix dct_matrix(Index n) {
  DenseMatrix psi(n, n);
  for (Index j = 0; j < n; ++j) {
    psi.col(j) = dct_inverse(RealVector::Unit(n, j));
  }
  return psi;
}

SparsifiedSegment sparsify(const RealVector& a, double factor) {
  if (a.size() == 0) throw std::invalid_argument("sparsify: empty input");
  SparsifiedSegment s;
  s.threshold = factor * a.cwiseAbs().mean();
  s.coeffs = RealVector::Zero(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > s.threshold) {
      s.coeffs[i] = a[i];
      ++s.s_sparsity;
    }
  }
  return s;
}

DenseMatrix measurement_matrix(const MeasurementSpec& spec) {
  if (spec.m < 1 || spec.n < 1) {
    throw std::invalid_argument("measurement_matrix: dimensions must be >= 1");
  }
  if (spec.m > spec.n) {
    throw std::invalid_argument("measurement_matrix: m = " +
                                std::to_string(spec.m) + " exceeds n = " +
                                std::to_string(spec.n));
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix phi(spec.m, spec.n);
  for (Index j = 0; j < spec.n; ++j) {
    for (Index i = 0; i < spec.m; ++i) phi(i, j) = gauss(rng);
  }
  if (spec.kind == MatrixKind::kRnm) phi.colwise().normalize();
  return phi;
}

RealVector compress(const DenseMatrix& phi, const RealVector& a) {
  return mat_vec(phi, a);
}

RealVector reconstruct(std::vector<std::pair<Index, RealVector>> recovered,
                       Index pad_len) {
  if (recovered.empty()) throw std::invalid_argument("reconstruct: no segments");
  std::sort(recovered.begin(), recovered.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  const Index n = recovered.front().second.size();
  const Index count = static_cast<Index>(recovered.size());
  for (Index k = 0; k < count; ++k) {
    const auto& [index, coeffs] = recovered[static_cast<std::size_t>(k)];
    if (index != k) {
      throw std::invalid_argument("reconstruct: missing segment index " +
                                  std::to_string(k));
    }
    if (coeffs.size() != n) {
      throw DimensionError("reconstruct: segment " + std::to_string(k) +
                           " has length " + std::to_string(coeffs.size()) +
                           ", expected " + std::to_string(n));
    }
  }
  if (pad_len < 0 || pad_len >= n) {
    throw std::invalid_argument("reconstruct: pad_len out of range");
  }
  RealVector out(count * n - pad_len);
  for (Index k = 0; k < count; ++k) {
    const RealVector frame = dct_inverse(recovered[static_cast<std::size_t>(k)].second);
    const Index len = std::min(n, out.size() - k * n);
    out.segment(k * n, len) = frame.head(len);
  }
  return out;
}

double mutual_coherence(const DenseMatrix& phi, const DenseMatrix& psi) {
  if (phi.rows() != psi.rows()) {
    throw DimensionError("mutual_coherence: column lengths differ (" +
                         std::to_string(phi.rows()) + " vs " +
                         std::to_string(psi.rows()) + ")");
  }
  const DenseMatrix g = (phi.transpose() * psi).cwiseAbs();
  double mu = 0.0;
  for (Index j = 0; j < g.cols(); ++j) {
    for (Index i = 0; i < g.rows(); ++i) {
      if (i != j) mu = std::max(mu, g(i, j));
    }
  }
  return mu;
}

Index suggested_measurements(Index s, Index n, double c, double mu) {
  if (s < 1 || n < 2 || !(c > 0.0)) {
    throw std::invalid_argument(
        "suggested_measurements: requires S >= 1, n >= 2, C > 0");
  }
  return static_cast<Index>(std::ceil(c * mu * mu * static_cast<double>(s) *
                                      std::log(static_cast<double>(n))));
}

double rms(const RealVector& v) {
  return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

std::vector<bool> energy_gate(const std::vector<Segment>& segments,
                              double full_rms, double ratio) {
  std::vector<bool> voiced;
  voiced.reserve(segments.size());
  for (const Segment& s : segments) {
    const double r = rms(s.samples.head(s.samples.size() - s.pad_len));
    voiced.push_back(r > 0.0 && r >= ratio * full_rms);
  }
  return voiced;
}

}  // namespace maxfs
