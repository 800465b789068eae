// Copyright 2026 The v2s Authors. All Rights Reserved.
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

#ifndef V2S_DSP_OVERLAP_ADD_HPP_
#define V2S_DSP_OVERLAP_ADD_HPP_

#include <Eigen/Dense>

#include <vector>

#include "v2s/core/error.hpp"
#include "v2s/core/types.hpp"

namespace v2s::dsp {

/// Reconstructs a signal from T segments of length 2N placed at hop N.
///
/// `segments` holds one segment per column (2N x T). Where two segments
/// overlap the output is their arithmetic mean; the head passes through
/// unchanged and the final N-sample tail is dropped, so the result has
/// exactly T*N samples.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> overlap_add(
    const Eigen::MatrixBase<Derived>& segments) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index seg_len = segments.rows();
  const Eigen::Index count = segments.cols();
  if (count < 1) throw ShapeError("overlap_add needs at least one segment");
  if (seg_len < 2 || seg_len % 2 != 0) throw ShapeError("overlap_add segments must have even length 2N");
  const Eigen::Index hop = seg_len / 2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(count * hop);
  out.head(hop) = segments.col(0).head(hop);
  for (Eigen::Index t = 1; t < count; ++t) {
    out.segment(t * hop, hop) =
        Scalar(0.5) * (segments.col(t - 1).tail(hop) + segments.col(t).head(hop));
  }
  return out;
}

/// Adjoint of overlap_add: maps dL/d(output) (T*N) to dL/d(segments) (2N x T).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> overlap_add_backward(
    const Eigen::MatrixBase<Derived>& grad_out, Eigen::Index hop) {
  using Scalar = typename Derived::Scalar;
  if (hop < 1 || grad_out.size() % hop != 0) throw ShapeError("overlap_add_backward: bad hop");
  const Eigen::Index count = grad_out.size() / hop;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> grad(2 * hop, count);
  for (Eigen::Index t = 0; t < count; ++t) {
    const Scalar head_w = t == 0 ? Scalar(1) : Scalar(0.5);
    grad.col(t).head(hop) = head_w * grad_out.segment(t * hop, hop);
    if (t + 1 < count) {
      grad.col(t).tail(hop) = Scalar(0.5) * grad_out.segment((t + 1) * hop, hop);
    } else {
      grad.col(t).tail(hop).setZero();
    }
  }
  return grad;
}

/// Convenience form over individually stored segments. Throws ShapeError
/// when the segment lengths differ.
Waveform overlap_add(const std::vector<Eigen::VectorXd>& segments,
                     int sample_rate = kDefaultSampleRate);

}  // namespace v2s::dsp

#endif  // V2S_DSP_OVERLAP_ADD_HPP_
