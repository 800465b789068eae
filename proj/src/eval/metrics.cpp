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

#include "v2s/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "v2s/core/error.hpp"

namespace v2s::eval {

namespace {

constexpr int kStoiFrame = 256;
constexpr int kStoiFft = 512;
constexpr int kStoiBands = 15;
constexpr double kStoiMinFreq = 150.0;
constexpr double kStoiClipDb = -15.0;
constexpr double kStoiDynRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double bessel_i0(double x) { return std::cyl_bessel_i(0.0, x); }

/// Symmetric Hann of length n without its zero end points.
Eigen::VectorXd interior_hann(int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (n + 1));
  return w;
}

/// Start offsets i = 0, hop, ... with i < n - frame.
std::vector<Eigen::Index> frame_starts(Eigen::Index n, int frame, int hop) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < n - frame; i += hop) out.push_back(i);
  return out;
}

/// Drops frames more than 40 dB below the loudest clean frame from both
/// signals and re-synthesizes them by overlap-add.
std::pair<Eigen::VectorXd, Eigen::VectorXd> remove_silent_frames(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int hop = kStoiFrame / 2;
  const Eigen::VectorXd w = interior_hann(kStoiFrame);
  const auto starts = frame_starts(x.size(), kStoiFrame, hop);
  std::vector<double> energy;
  for (Eigen::Index s : starts) {
    energy.push_back(20.0 * std::log10((w.array() * x.segment(s, kStoiFrame).array()).matrix().norm() + kEps));
  }
  const double loudest = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  std::vector<Eigen::Index> kept;
  for (size_t i = 0; i < starts.size(); ++i)
    if (loudest - kStoiDynRange - energy[i] < 0.0) kept.push_back(starts[i]);
  const Eigen::Index len = kept.empty() ? 0 : static_cast<Eigen::Index>(kept.size() - 1) * hop + kStoiFrame;
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(len), ys = Eigen::VectorXd::Zero(len);
  for (size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index at = static_cast<Eigen::Index>(k) * hop;
    xs.segment(at, kStoiFrame) += (w.array() * x.segment(kept[k], kStoiFrame).array()).matrix();
    ys.segment(at, kStoiFrame) += (w.array() * y.segment(kept[k], kStoiFrame).array()).matrix();
  }
  return {xs, ys};
}

/// Power spectrogram, bins x frames, of 256-sample frames with hop 128.
Eigen::MatrixXd stoi_power(const Eigen::VectorXd& x) {
  const Eigen::VectorXd w = interior_hann(kStoiFrame);
  const auto starts = frame_starts(x.size(), kStoiFrame, kStoiFrame / 2);
  const int bins = kStoiFft / 2 + 1;
  Eigen::MatrixXd p(bins, static_cast<Eigen::Index>(starts.size()));
  Eigen::FFT<double> fft;
  std::vector<double> buf(kStoiFft);
  std::vector<std::complex<double>> spec;
  for (size_t f = 0; f < starts.size(); ++f) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < kStoiFrame; ++i) buf[static_cast<size_t>(i)] = w[i] * x[starts[f] + i];
    fft.fwd(spec, buf);
    for (int k = 0; k < bins; ++k) p(k, static_cast<Eigen::Index>(f)) = std::norm(spec[static_cast<size_t>(k)]);
  }
  return p;
}

/// One-third octave band matrix over the 512-point FFT bins at 10 kHz.
Eigen::MatrixXd third_octave_bands() {
  const int bins = kStoiFft / 2 + 1;
  auto nearest_bin = [&](double hz) {
    int best = 0;
    double best_d = INFINITY;
    for (int k = 0; k < bins; ++k) {
      const double d = std::pow(k * kStoiRate / kStoiFft - hz, 2);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  Eigen::MatrixXd obm = Eigen::MatrixXd::Zero(kStoiBands, bins);
  for (int b = 0; b < kStoiBands; ++b) {
    const int lo = nearest_bin(kStoiMinFreq * std::pow(2.0, (2.0 * b - 1.0) / 6.0));
    const int hi = nearest_bin(kStoiMinFreq * std::pow(2.0, (2.0 * b + 1.0) / 6.0));
    for (int k = lo; k < hi; ++k) obm(b, k) = 1.0;
  }
  return obm;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Eigen::VectorXd resample(const Eigen::Ref<const Eigen::VectorXd>& x, int up, int down) {
  if (up <= 0 || down <= 0) throw ConfigError("resample factors must be positive");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return x;
  // Kaiser-windowed sinc with 60 dB stopband rejection and a transition
  // width of a tenth of the cutoff, normalized to unit DC gain per phase.
  const int max_rate = std::max(up, down);
  const double cutoff = 1.0 / (2.0 * max_rate);
  const double rejection_db = 60.0;
  const int half = static_cast<int>(std::ceil((rejection_db - 8.0) / (28.714 * cutoff / 10.0)));
  const double beta = 0.1102 * (rejection_db - 8.7);
  Eigen::VectorXd h(2 * half + 1);
  for (int n = -half; n <= half; ++n) {
    const double t = 2.0 * cutoff * n;
    const double sinc = n == 0 ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
    const double r = static_cast<double>(n) / half;
    h[n + half] = sinc * bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / bessel_i0(beta);
  }
  h *= up / h.sum();
  const Eigen::Index n_out = (x.size() * up + down - 1) / down;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_out);
  for (Eigen::Index m = 0; m < n_out; ++m) {
    const Eigen::Index center = m * down;
    const Eigen::Index k_lo = std::max<Eigen::Index>(0, (center - half + up - 1) / up);
    const Eigen::Index k_hi = std::min<Eigen::Index>(x.size() - 1, (center + half) / up);
    double acc = 0.0;
    for (Eigen::Index k = k_lo; k <= k_hi; ++k) acc += x[k] * h[center - k * up + half];
    y[m] = acc;
  }
  return y;
}

double stoi(const Waveform& clean, const Waveform& degraded) {
  if (clean.size() != degraded.size()) {
    throw ShapeError("stoi: clean has " + std::to_string(clean.size()) + " samples but degraded has " +
                     std::to_string(degraded.size()));
  }
  if (clean.sample_rate() != degraded.sample_rate()) throw ShapeError("stoi: sample rates differ");
  const int rate = clean.sample_rate();
  const int target = static_cast<int>(kStoiRate);
  const Eigen::VectorXd x10 = resample(clean.samples(), target, rate);
  const Eigen::VectorXd y10 = resample(degraded.samples(), target, rate);
  const auto [x, y] = remove_silent_frames(x10, y10);
  const Eigen::MatrixXd obm = third_octave_bands();
  const Eigen::MatrixXd x_tob = (obm * stoi_power(x)).cwiseSqrt();
  const Eigen::MatrixXd y_tob = (obm * stoi_power(y)).cwiseSqrt();
  const Eigen::Index frames = x_tob.cols();
  if (frames < kStoiSegment) {
    throw ShapeError("stoi: only " + std::to_string(frames) + " non-silent frames, need at least " +
                     std::to_string(kStoiSegment));
  }
  const double clip = std::pow(10.0, -kStoiClipDb / 20.0);
  double total = 0.0;
  const Eigen::Index segments = frames - kStoiSegment + 1;
  for (Eigen::Index m = 0; m < segments; ++m) {
    for (int b = 0; b < kStoiBands; ++b) {
      const Eigen::RowVectorXd xs = x_tob.row(b).segment(m, kStoiSegment);
      const Eigen::RowVectorXd ys = y_tob.row(b).segment(m, kStoiSegment);
      const double norm_const = xs.norm() / (ys.norm() + kEps);
      Eigen::RowVectorXd yp = (ys * norm_const).cwiseMin(xs * (1.0 + clip));
      yp.array() -= yp.mean();
      Eigen::RowVectorXd xc = xs.array() - xs.mean();
      yp /= yp.norm() + kEps;
      xc /= xc.norm() + kEps;
      total += yp.dot(xc);
    }
  }
  return total / (static_cast<double>(kStoiBands) * static_cast<double>(segments));
}

double mcd_scale() { return 10.0 / std::log(10.0) * std::sqrt(2.0); }

double mcd_from_mfcc(const Eigen::Ref<const Eigen::MatrixXd>& reference, const Eigen::Ref<const Eigen::MatrixXd>& estimate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols()) {
    throw ShapeError("mcd: MFCC matrices differ in shape");
  }
  if (reference.rows() < 2 || reference.cols() == 0) throw ShapeError("mcd: need at least two coefficients and one frame");
  const Eigen::Index n = reference.rows() - 1;
  const Eigen::RowVectorXd dist =
      (reference.bottomRows(n) - estimate.bottomRows(n)).colwise().norm();
  return mcd_scale() * dist.mean();
}

double mcd(const Waveform& reference, const Waveform& estimate, const dsp::MfccParams& params) {
  if (reference.size() != estimate.size()) {
    throw ShapeError("mcd: reference has " + std::to_string(reference.size()) + " samples but estimate has " +
                     std::to_string(estimate.size()));
  }
  return mcd_from_mfcc(dsp::mfcc(reference.samples(), params), dsp::mfcc(estimate.samples(), params));
}

double WordErrors::rate() const {
  return static_cast<double>(substitutions + deletions + insertions) / reference_words;
}

WordErrors word_errors(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  if (reference.empty()) throw RangeError("wer: reference has no words");
  const size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::string> ref(n), hyp(m);
  std::transform(reference.begin(), reference.end(), ref.begin(), lower);
  std::transform(hypothesis.begin(), hypothesis.end(), hyp.begin(), lower);
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1), d[i - 1][j] + 1, d[i][j - 1] + 1});
  WordErrors e;
  e.reference_words = static_cast<int>(n);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++e.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++e.deletions;
      --i;
    } else {
      ++e.insertions;
      --j;
    }
  }
  return e;
}

double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  return word_errors(reference, hypothesis).rate();
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace v2s::eval
