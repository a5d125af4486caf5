// Copyright 2026 The Panodepth Authors.
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

#include "panodepth/depth_losses.h"

#include <cmath>
#include <cstddef>
#include <string>

namespace panodepth {
namespace {

// Mirror index into [0, n) without repeating the edge sample.
int Reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

template <LossScalar T>
T Sigmoid(const T& x) {
  if (ValueOf(x) >= 0.0) return 1.0 / (1.0 + exp(-x));
  const T e = exp(x);
  return e / (1.0 + e);
}

}  // namespace

void PhotometricConfig::Validate() const {
  Require(alpha >= 0.0 && alpha <= 1.0, "photometric: alpha must be in [0, 1]");
  Require(ssim_window >= 3 && ssim_window % 2 == 1,
          "photometric: ssim_window must be odd and >= 3");
  Require(c1 > 0.0 && c2 > 0.0, "photometric: SSIM stabilizers must be > 0");
}

template <LossScalar T>
Grid<T> SsimMap(const Grid<T>& a, const Grid<T>& b,
                const PhotometricConfig& cfg) {
  cfg.Validate();
  RequireSameShape(a, b, "ssim_map inputs");
  const int h = a.height();
  const int w = a.width();
  const int ch = a.channels();
  const int radius = cfg.ssim_window / 2;
  const double inv_n = 1.0 / (cfg.ssim_window * cfg.ssim_window);

  Grid<T> out(h, w, ch);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < ch; ++k) {
        T mu_a(0.0), mu_b(0.0), aa(0.0), bb(0.0), ab(0.0);
        for (int dr = -radius; dr <= radius; ++dr) {
          const int rr = Reflect(r + dr, h);
          for (int dc = -radius; dc <= radius; ++dc) {
            const int cc = Reflect(c + dc, w);
            const T& x = a(rr, cc, k);
            const T& y = b(rr, cc, k);
            mu_a += x;
            mu_b += y;
            aa += x * x;
            bb += y * y;
            ab += x * y;
          }
        }
        mu_a = mu_a * inv_n;
        mu_b = mu_b * inv_n;
        const T var_a = aa * inv_n - mu_a * mu_a;
        const T var_b = bb * inv_n - mu_b * mu_b;
        const T cov = ab * inv_n - mu_a * mu_b;
        const T num = (2.0 * mu_a * mu_b + cfg.c1) * (2.0 * cov + cfg.c2);
        const T den =
            (mu_a * mu_a + mu_b * mu_b + cfg.c1) * (var_a + var_b + cfg.c2);
        out(r, c, k) = num / den;
      }
    }
  }
  return out;
}

template <LossScalar T>
Grid<T> PhotometricError(const Grid<T>& target, const Grid<T>& candidate,
                         const PhotometricConfig& cfg) {
  const Grid<T> ssim = SsimMap(target, candidate, cfg);
  const int ch = target.channels();
  Grid<T> out(target.height(), target.width(), 1);
  for (int r = 0; r < target.height(); ++r) {
    for (int c = 0; c < target.width(); ++c) {
      T acc(0.0);
      for (int k = 0; k < ch; ++k) {
        const T dssim = Clamp(T((1.0 - ssim(r, c, k)) * 0.5), 0.0, 1.0);
        acc += cfg.alpha * dssim +
               (1.0 - cfg.alpha) * abs(target(r, c, k) - candidate(r, c, k));
      }
      out(r, c) = acc / static_cast<double>(ch);
    }
  }
  return out;
}

template <LossScalar T>
MinReprojection<T> MinReprojectionError(const ReprojectionSet<T>& set,
                                        const PhotometricConfig& cfg) {
  if (set.warped.empty() && set.context.empty()) {
    Fail(ErrorCode::kDegenerateInput, "min_reprojection: empty candidate set");
  }
  const int h = set.target.height();
  const int w = set.target.width();
  std::vector<Grid<T>> errors;
  std::vector<const ValidMask*> masks;
  for (const auto& f : set.warped) {
    RequireSameShape(set.target, f.image, "min_reprojection warped frame");
    RequireSameShape(set.target, f.valid, "min_reprojection warp mask", false);
    errors.push_back(PhotometricError(set.target, f.image, cfg));
    masks.push_back(&f.valid);
  }
  for (const auto& f : set.context) {
    RequireSameShape(set.target, f, "min_reprojection context frame");
    errors.push_back(PhotometricError(set.target, f, cfg));
    masks.push_back(nullptr);
  }
  if (set.excluded) {
    RequireSameShape(set.target, *set.excluded, "min_reprojection exclusion",
                     false);
  }

  MinReprojection<T> out{Grid<T>(h, w, 1), MakeMask(h, w, false)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool have = false;
      bool any_warp = false;
      T best(0.0);
      for (std::size_t i = 0; i < errors.size(); ++i) {
        if (masks[i] != nullptr) {
          if ((*masks[i])(r, c) == 0) continue;
          any_warp = true;
        }
        best = have ? Min(best, errors[i](r, c)) : errors[i](r, c);
        have = true;
      }
      out.error(r, c) = best;
      const bool excluded = set.excluded && (*set.excluded)(r, c) != 0;
      out.valid(r, c) = any_warp && !excluded;
    }
  }
  return out;
}

template <LossScalar T>
T MaskedPhotometricLoss(const std::vector<ReprojectionSet<T>>& per_scale,
                        const PhotometricConfig& cfg) {
  Require(!per_scale.empty(), "masked_photometric_loss: no scales");
  T total(0.0);
  for (std::size_t i = 0; i < per_scale.size(); ++i) {
    const MinReprojection<T> m = MinReprojectionError(per_scale[i], cfg);
    T sum(0.0);
    std::size_t count = 0;
    for (std::size_t p = 0; p < m.error.size(); ++p) {
      if (m.valid.data()[p] == 0) continue;
      sum += m.error.data()[p];
      ++count;
    }
    if (count == 0) {
      Fail(ErrorCode::kDegenerateInput,
           "masked_photometric_loss: no valid pixels at scale " +
               std::to_string(i));
    }
    total += sum / static_cast<double>(count);
  }
  return total;
}

template <LossScalar T>
T SmoothnessLoss(const MultiScaleDepth<T>& depth, const ImageGrid& image) {
  Require(!depth.empty(), "smoothness_loss: no scales");
  const int h = image.height();
  const int w = image.width();
  const int ch = image.channels();

  // Edge weights depend on the image only; shared by all scales.
  Grid<double> weight_x(h, w), weight_y(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double gx = 0.0, gy = 0.0;
      for (int k = 0; k < ch; ++k) {
        if (c + 1 < w) gx += std::abs(image(r, c + 1, k) - image(r, c, k));
        if (r + 1 < h) gy += std::abs(image(r + 1, c, k) - image(r, c, k));
      }
      weight_x(r, c) = std::exp(-gx / ch);
      weight_y(r, c) = std::exp(-gy / ch);
    }
  }

  T total(0.0);
  double scale_weight = 1.0;
  for (const Grid<T>& d : depth) {
    RequireSameShape(d, image, "smoothness_loss depth vs image", false);
    Require(d.channels() == 1, "smoothness_loss: depth must be single channel");
    Grid<T> inv(h, w);
    T mean(0.0);
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (!(ValueOf(d.data()[p]) > 0.0)) {
        Fail(ErrorCode::kContractViolation,
             "smoothness_loss: non-positive depth");
      }
      inv.data()[p] = 1.0 / d.data()[p];
      mean += inv.data()[p];
    }
    mean = mean / static_cast<double>(d.size());
    for (auto& v : inv.data()) v = v / mean;

    T acc(0.0);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (c + 1 < w) acc += abs(inv(r, c + 1) - inv(r, c)) * weight_x(r, c);
        if (r + 1 < h) acc += abs(inv(r + 1, c) - inv(r, c)) * weight_y(r, c);
      }
    }
    total += scale_weight * acc / static_cast<double>(d.pixel_count());
    scale_weight *= 0.5;
  }
  return total;
}

template <LossScalar T>
T DepthLoss(const std::vector<ReprojectionSet<T>>& per_scale,
            const MultiScaleDepth<T>& depth, const ImageGrid& image,
            const PhotometricConfig& cfg) {
  return MaskedPhotometricLoss(per_scale, cfg) +
         kSmoothnessWeight * SmoothnessLoss(depth, image);
}

template <LossScalar T>
Grid<T> SigmoidToDepth(const Grid<T>& logits, double min_depth,
                       double max_depth) {
  Require(min_depth > 0.0 && min_depth < max_depth,
          "sigmoid_to_depth: need 0 < min_depth < max_depth");
  const double min_disp = 1.0 / max_depth;
  const double disp_range = 1.0 / min_depth - min_disp;
  Grid<T> out(logits.height(), logits.width(), logits.channels(), T(),
              GridRole::kDepth);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const T disp = min_disp + disp_range * Sigmoid(logits.data()[i]);
    out.data()[i] = 1.0 / disp;
  }
  return out;
}

#define PANODEPTH_INSTANTIATE_DEPTH_LOSSES(T)                                  \
  template Grid<T> SsimMap(const Grid<T>&, const Grid<T>&,                     \
                           const PhotometricConfig&);                          \
  template Grid<T> PhotometricError(const Grid<T>&, const Grid<T>&,            \
                                    const PhotometricConfig&);                 \
  template MinReprojection<T> MinReprojectionError(const ReprojectionSet<T>&,  \
                                                   const PhotometricConfig&);  \
  template T MaskedPhotometricLoss(const std::vector<ReprojectionSet<T>>&,     \
                                   const PhotometricConfig&);                  \
  template T SmoothnessLoss(const MultiScaleDepth<T>&, const ImageGrid&);      \
  template T DepthLoss(const std::vector<ReprojectionSet<T>>&,                 \
                       const MultiScaleDepth<T>&, const ImageGrid&,            \
                       const PhotometricConfig&);                              \
  template Grid<T> SigmoidToDepth(const Grid<T>&, double, double);

PANODEPTH_INSTANTIATE_DEPTH_LOSSES(double)
PANODEPTH_INSTANTIATE_DEPTH_LOSSES(Dual)

#undef PANODEPTH_INSTANTIATE_DEPTH_LOSSES

}  // namespace panodepth
