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

// Frame-based DCT compression path: segmentation, transform, thresholding,
// random measurement and reassembly.

#ifndef MAXFS_PIPELINE_HPP_
#define MAXFS_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxfs/numcore.hpp"

namespace maxfs {

inline constexpr Index kDefaultFrameLength = 256;
inline constexpr double kDefaultThresholdFactor = 1.3;
inline constexpr double kDefaultGateRatio = 1e-3;

struct Segment {
  Index index = 0;
  RealVector samples;
  /// Trailing zeros appended to the last frame.
  Index pad_len = 0;
};

struct SparsifiedSegment {
  RealVector coeffs;
  Index s_sparsity = 0;
  double threshold = 0.0;
};

enum class MatrixKind { kRgm, kRnm };

std::string to_string(MatrixKind kind);
/// Accepts "RGM"/"RNM" in any case.
MatrixKind parse_matrix_kind(std::string_view text);

struct MeasurementSpec {
  MatrixKind kind = MatrixKind::kRgm;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
};

std::vector<Segment> segment(const RealVector& signal, Index n);

/// Orthonormal DCT-II.
RealVector dct_forward(const RealVector& f);
/// Orthonormal DCT-III, the inverse of dct_forward.
RealVector dct_inverse(const RealVector& a);
/// n x n synthesis matrix whose columns are the DCT basis vectors, so that
/// f = dct_matrix(n) * dct_forward(f).
DenseMatrix dct_matrix(Index n);

SparsifiedSegment sparsify(const RealVector& a,
                           double factor = kDefaultThresholdFactor);

DenseMatrix measurement_matrix(const MeasurementSpec& spec);

RealVector compress(const DenseMatrix& phi, const RealVector& a);

/// Inverse-transforms each (index, coefficients) pair, concatenates them in
/// index order and strips pad_len samples from the end. Indices must be
/// exactly 0..k-1 in any order.
RealVector reconstruct(std::vector<std::pair<Index, RealVector>> recovered,
                       Index pad_len);

/// max |<phi_i, psi_j>| over i != j. Columns of both matrices must have the
/// same length.
double mutual_coherence(const DenseMatrix& phi, const DenseMatrix& psi);

/// ceil(C * mu^2 * S * ln n).
Index suggested_measurements(Index s, Index n, double c = 1.0, double mu = 1.0);

double rms(const RealVector& v);

/// Per-segment voiced flags: rms(segment) >= ratio * full_rms and > 0.
std::vector<bool> energy_gate(const std::vector<Segment>& segments,
                              double full_rms,
                              double ratio = kDefaultGateRatio);

}  // namespace maxfs

#endif  // MAXFS_PIPELINE_HPP_
