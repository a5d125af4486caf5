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

#include "panodepth/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>

#include "panodepth/camera.h"
#include "panodepth/depth_losses.h"
#include "panodepth/multitask.h"
#include "panodepth/numgrad.h"
#include "panodepth/panoptic_losses.h"
#include "panodepth/synthetic.h"

namespace panodepth {
namespace {

using Rng = std::mt19937_64;

std::vector<double> RandomDirection(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> dir(n);
  double norm = 0.0;
  for (auto& d : dir) {
    d = normal(rng);
    norm += d * d;
  }
  norm = std::sqrt(norm);
  for (auto& d : dir) d /= norm;
  return dir;
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<Dual> Seed(const std::vector<double>& x,
                       const std::vector<double>& dir) {
  std::vector<Dual> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Dual(x[i], dir[i]);
  return out;
}

// A kink g(x + t * dir) = 0 lies within `margin` of t = 0 (to first order).
bool NearKink(const Dual& g, double margin) {
  return std::abs(g.value) < margin * std::abs(g.deriv);
}

template <typename F>
double RelativeError(F&& f, const std::vector<double>& x,
                     const std::vector<double>& dir, const GradcheckConfig& cfg) {
  const double dual = DirectionalDerivative(f, x, dir);
  const double fd = FiniteDifference(f, x, dir, cfg.step);
  return GradientRelativeError(dual, fd);
}

// ---------------------------------------------------------------------------
// Bootstrapped cross entropy on softmax probabilities.

struct CeProblem {
  int height = 4, width = 6, classes = 4;
  LabelGrid targets;
  ImageGrid weights;
  BootstrapConfig bootstrap;
};

CeProblem DrawCeProblem(Rng& rng) {
  CeProblem p;
  p.targets = LabelGrid(p.height, p.width);
  p.weights = ImageGrid(p.height, p.width);
  std::uniform_int_distribution<int> cls(0, p.classes - 1);
  for (auto& t : p.targets.data()) t = cls(rng);
  for (auto& w : p.weights.data()) w = Uniform(rng, 0.0, 1.0) < 0.3 ? 3.0 : 1.0;
  const double fractions[] = {0.15, 0.5, 1.0};
  p.bootstrap.top_fraction = fractions[std::uniform_int_distribution<int>(0, 2)(rng)];
  return p;
}

template <typename T>
Grid<T> Softmax(std::span<const T> logits, int height, int width, int classes) {
  Grid<T> probs(height, width, classes);
  for (int i = 0; i < height * width; ++i) {
    double max_value = ValueOf(logits[i * classes]);
    for (int k = 1; k < classes; ++k)
      max_value = std::max(max_value, ValueOf(logits[i * classes + k]));
    T sum(0.0);
    for (int k = 0; k < classes; ++k) {
      probs.data()[i * classes + k] = exp(logits[i * classes + k] - max_value);
      sum += probs.data()[i * classes + k];
    }
    for (int k = 0; k < classes; ++k) probs.data()[i * classes + k] /= sum;
  }
  return probs;
}

template <typename T>
T CeLoss(const CeProblem& p, std::span<const T> logits) {
  return BootstrappedCrossEntropy(
      Softmax(logits, p.height, p.width, p.classes), p.targets, p.weights,
      p.bootstrap);
}

// Any kept/dropped pair of per-pixel losses about to swap order changes the
// top-K selection.
bool CeNearKink(const CeProblem& p, std::span<const Dual> logits, double margin) {
  const Grid<Dual> probs = Softmax(logits, p.height, p.width, p.classes);
  std::vector<Dual> losses;
  for (std::size_t i = 0; i < p.targets.size(); ++i) {
    losses.push_back(p.weights.data()[i] *
                     -log(probs.data()[i * p.classes + p.targets.data()[i]]));
  }
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return losses[a].value > losses[b].value;
  });
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::ceil(p.bootstrap.top_fraction * losses.size() - 1e-9)),
      1, losses.size());
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = k; b < losses.size(); ++b) {
      if (NearKink(losses[order[a]] - losses[order[b]], margin)) return true;
    }
  }
  return false;
}

std::optional<double> CeTrial(Rng& rng, const GradcheckConfig& cfg) {
  const CeProblem p = DrawCeProblem(rng);
  std::vector<double> x(p.height * p.width * p.classes);
  for (auto& v : x) v = Uniform(rng, -2.0, 2.0);
  const std::vector<double> dir = RandomDirection(rng, x.size());
  if (CeNearKink(p, Seed(x, dir), cfg.kink_margin)) return std::nullopt;
  auto f = [&](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    return CeLoss<T>(p, v);
  };
  return RelativeError(f, x, dir, cfg);
}

// ---------------------------------------------------------------------------
// Panoptic loss over logits, heatmap prediction and offset prediction.

std::optional<double> PanopticTrial(Rng& rng, const GradcheckConfig& cfg) {
  const CeProblem p = DrawCeProblem(rng);
  const int n = p.height * p.width;
  const int n_logits = n * p.classes;
  ImageGrid heat_target(p.height, p.width), off_target(p.height, p.width, 2);
  ValidMask things = MakeMask(p.height, p.width, false);
  for (auto& v : heat_target.data()) v = Uniform(rng, 0.0, 1.0);
  for (auto& v : off_target.data()) v = Uniform(rng, -5.0, 5.0);
  for (auto& m : things.data()) m = Uniform(rng, 0.0, 1.0) < 0.5;

  std::vector<double> x(n_logits + 3 * n);
  for (int i = 0; i < n_logits; ++i) x[i] = Uniform(rng, -2.0, 2.0);
  for (int i = 0; i < n; ++i) x[n_logits + i] = Uniform(rng, 0.0, 1.0);
  for (int i = 0; i < 2 * n; ++i) x[n_logits + n + i] = Uniform(rng, -5.0, 5.0);
  const std::vector<double> dir = RandomDirection(rng, x.size());

  const std::vector<Dual> seeded = Seed(x, dir);
  if (CeNearKink(p, std::span<const Dual>(seeded).first(n_logits), cfg.kink_margin))
    return std::nullopt;
  for (int i = 0; i < 2 * n; ++i) {
    if (things.data()[i / 2] &&
        NearKink(seeded[n_logits + n + i] - off_target.data()[i], cfg.kink_margin))
      return std::nullopt;
  }

  auto f = [&](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    const std::span<const T> all(v);
    Grid<T> heat(p.height, p.width), off(p.height, p.width, 2);
    std::copy_n(all.begin() + n_logits, n, heat.data().begin());
    std::copy_n(all.begin() + n_logits + n, 2 * n, off.data().begin());
    return PanopticLoss<T>(CeLoss<T>(p, all.first(n_logits)),
                           HeatmapMse(heat, heat_target),
                           OffsetL1(off, off_target, things));
  };
  return RelativeError(f, x, dir, cfg);
}

// ---------------------------------------------------------------------------
// Per-pixel photometric error, reduced by the mean.

std::optional<double> PhotometricTrial(Rng& rng, const GradcheckConfig& cfg) {
  const int h = 6, w = 6;
  ImageGrid target(h, w);
  for (auto& v : target.data()) v = Uniform(rng, 0.1, 0.9);
  std::vector<double> x(h * w);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(target.data()[i] + Uniform(rng, -0.3, 0.3), 0.0, 1.0);
  const std::vector<double> dir = RandomDirection(rng, x.size());
  const std::vector<Dual> seeded = Seed(x, dir);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (NearKink(seeded[i] - target.data()[i], cfg.kink_margin)) return std::nullopt;
  }
  PhotometricConfig pc;
  pc.alpha = Uniform(rng, 0.0, 1.0);
  auto f = [&](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    Grid<T> candidate(h, w);
    std::copy(v.begin(), v.end(), candidate.data().begin());
    const Grid<T> err = PhotometricError(target.Cast<T>(), candidate, pc);
    T sum(0.0);
    for (const T& e : err.data()) sum += e;
    return sum / static_cast<double>(err.size());
  };
  return RelativeError(f, x, dir, cfg);
}

// ---------------------------------------------------------------------------
// Depth objective on a small rendered frame triple.

struct DepthProblem {
  Intrinsics k;
  ImageGrid target, prev, next;
  PoseSE3 to_prev, to_next;
  ImageGrid true_depth;
  PhotometricConfig photometric;
  int scales = 3;
};

DepthProblem MakeDepthProblem() {
  SceneSpec spec;
  spec.intrinsics = {8.0, 8.0, 3.5, 1.5, 8, 8};
  spec.texture.period_m = 1.5;
  // A wall behind the ground keeps every pixel at a finite depth.
  spec.boxes.push_back({{0.0, -13.5, 12.0}, {100.0, 30.0, 1.0}, kBuilding, 0.9});
  spec.boxes.push_back({{0.5, 0.9, 5.0}, {1.6, 1.2, 2.0}, kCar, 0.8});
  DepthProblem p;
  p.k = spec.intrinsics;
  p.to_prev = PoseFromAxisAngle({0.0, 0.02, 0.0}, {0.05, 0.0, 0.4});
  p.to_next = PoseFromAxisAngle({0.0, -0.02, 0.01}, {-0.05, 0.0, -0.4});
  const RenderedPair a = RenderPair(spec, PoseSE3::Identity(), p.to_prev);
  const RenderedPair b = RenderPair(spec, PoseSE3::Identity(), p.to_next);
  p.target = a.target.image;
  p.true_depth = a.target.depth;
  p.prev = a.source.image;
  p.next = b.source.image;
  return p;
}

template <typename T>
std::vector<ReprojectionSet<T>> BuildSets(const DepthProblem& p,
                                          const MultiScaleDepth<T>& depth) {
  std::vector<ReprojectionSet<T>> sets;
  for (const auto& d : depth) {
    ReprojectionSet<T> set;
    set.target = p.target.Cast<T>();
    for (const auto* pose : {&p.to_prev, &p.to_next}) {
      const ImageGrid& src = pose == &p.to_prev ? p.prev : p.next;
      SampledImage<T> warped = WarpFrame(src, d, *pose, p.k);
      set.warped.push_back({std::move(warped.image), std::move(warped.valid)});
    }
    set.context = {p.prev.Cast<T>(), p.next.Cast<T>()};
    sets.push_back(std::move(set));
  }
  return sets;
}

template <typename T>
MultiScaleDepth<T> Unflatten(const DepthProblem& p, const std::vector<T>& x) {
  MultiScaleDepth<T> depth;
  const std::size_t n = p.true_depth.size();
  for (int s = 0; s < p.scales; ++s) {
    Grid<T> d(p.k.height, p.k.width, 1, T(), GridRole::kDepth);
    std::copy_n(x.begin() + s * n, n, d.data().begin());
    depth.push_back(std::move(d));
  }
  return depth;
}

// Kinks of the warp-based photometric loss: bilinear cell edges and image
// borders, the L1 term of warped candidates, and the per-pixel minimum.
bool WarpNearKink(const DepthProblem& p, const MultiScaleDepth<Dual>& depth,
                  double margin) {
  for (const auto& d : depth) {
    const PointGrid<Dual> points = Backproject(d, p.k);
    for (const auto* pose : {&p.to_prev, &p.to_next}) {
      const PointGrid<Dual> moved = TransformPoints(points, *pose);
      for (std::size_t i = 0; i < moved.points.size(); ++i) {
        const auto& q = moved.points.data()[i];
        if (q.z.value <= 0.0) continue;
        const Dual u = p.k.fx * q.x / q.z + p.k.cx;
        const Dual v = p.k.fy * q.y / q.z + p.k.cy;
        if (NearKink(u - std::round(u.value), margin) ||
            NearKink(v - std::round(v.value), margin))
          return true;
      }
    }
  }
  const auto sets = BuildSets(p, depth);
  for (const auto& set : sets) {
    std::vector<Grid<Dual>> errors;
    for (const auto& wf : set.warped) {
      for (std::size_t i = 0; i < wf.image.size(); ++i) {
        if (wf.valid.data()[i] &&
            NearKink(wf.image.data()[i] - set.target.data()[i], margin))
          return true;
      }
      errors.push_back(PhotometricError(set.target, wf.image, p.photometric));
    }
    for (const auto& c : set.context)
      errors.push_back(PhotometricError(set.target, c, p.photometric));
    for (std::size_t i = 0; i < set.target.size(); ++i) {
      std::vector<Dual> values;
      for (std::size_t m = 0; m < errors.size(); ++m) {
        if (m < set.warped.size() && !set.warped[m].valid.data()[i]) continue;
        values.push_back(errors[m].data()[i]);
      }
      if (values.empty()) continue;
      const auto best = std::min_element(
          values.begin(), values.end(),
          [](const Dual& a, const Dual& b) { return a.value < b.value; });
      for (auto it = values.begin(); it != values.end(); ++it) {
        if (it != best && NearKink(*it - *best, margin)) return true;
      }
    }
  }
  return false;
}

bool SmoothnessNearKink(const MultiScaleDepth<Dual>& depth, double margin) {
  for (const auto& d : depth) {
    Grid<Dual> inv = d;
    Dual mean(0.0);
    for (auto& v : inv.data()) mean += (v = 1.0 / v);
    mean /= static_cast<double>(inv.size());
    for (auto& v : inv.data()) v /= mean;
    for (int r = 0; r < inv.height(); ++r) {
      for (int c = 0; c < inv.width(); ++c) {
        if (c + 1 < inv.width() && NearKink(inv(r, c + 1) - inv(r, c), margin))
          return true;
        if (r + 1 < inv.height() && NearKink(inv(r + 1, c) - inv(r, c), margin))
          return true;
      }
    }
  }
  return false;
}

std::vector<double> PerturbedDepth(const DepthProblem& p, Rng& rng) {
  std::vector<double> x;
  for (int s = 0; s < p.scales; ++s) {
    for (double d : p.true_depth.data()) x.push_back(d * Uniform(rng, 0.8, 1.2));
  }
  return x;
}

enum class DepthTerm { kPhotometric, kSmoothness, kTotal };

std::optional<double> DepthTrial(const DepthProblem& p, DepthTerm term,
                                 Rng& rng, const GradcheckConfig& cfg) {
  const std::vector<double> x = PerturbedDepth(p, rng);
  const std::vector<double> dir = RandomDirection(rng, x.size());
  const MultiScaleDepth<Dual> seeded = Unflatten(p, Seed(x, dir));
  if (term != DepthTerm::kSmoothness && WarpNearKink(p, seeded, cfg.kink_margin))
    return std::nullopt;
  if (term != DepthTerm::kPhotometric &&
      SmoothnessNearKink(seeded, cfg.kink_margin))
    return std::nullopt;
  auto f = [&](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    const MultiScaleDepth<T> depth = Unflatten(p, v);
    switch (term) {
      case DepthTerm::kPhotometric:
        return MaskedPhotometricLoss(BuildSets(p, depth), p.photometric);
      case DepthTerm::kSmoothness:
        return SmoothnessLoss(depth, p.target);
      case DepthTerm::kTotal:
        break;
    }
    return DepthLoss(BuildSets(p, depth), depth, p.target, p.photometric);
  };
  return RelativeError(f, x, dir, cfg);
}

// ---------------------------------------------------------------------------
// Uncertainty-weighted combination over losses and log-variances.

std::optional<double> CombinedTrial(Rng& rng, const GradcheckConfig& cfg) {
  std::vector<double> x(2 * kNumLossTerms);
  for (int i = 0; i < kNumLossTerms; ++i) {
    x[i] = Uniform(rng, 0.01, 2.0);
    x[kNumLossTerms + i] = Uniform(rng, -2.0, 2.0);
  }
  const std::vector<double> dir = RandomDirection(rng, x.size());
  auto f = [](const auto& v) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    const LossComponents<T> l{v[0], v[1], v[2], v[3], v[4]};
    return CombinedLoss<T>(l, {v[5], v[6], v[7], v[8], v[9]});
  };
  return RelativeError(f, x, dir, cfg);
}

GradcheckReport RunTrials(
    const std::string& name, const GradcheckConfig& cfg, Rng& rng,
    const std::function<std::optional<double>(Rng&)>& trial) {
  GradcheckReport report;
  report.name = name;
  const int max_attempts = 100 * std::max(cfg.trials, 1);
  for (int attempt = 0; attempt < max_attempts && report.trials < cfg.trials;
       ++attempt) {
    const std::optional<double> err = trial(rng);
    if (!err) {
      ++report.rejected;
      continue;
    }
    ++report.trials;
    report.max_rel_error = std::max(report.max_rel_error, *err);
    if (!(*err < cfg.tolerance)) ++report.failures;
  }
  return report;
}

}  // namespace

std::vector<GradcheckReport> RunGradientSuite(const GradcheckConfig& cfg) {
  Rng rng(cfg.seed);
  const DepthProblem depth = MakeDepthProblem();
  std::vector<GradcheckReport> reports;
  reports.push_back(RunTrials("bootstrapped_ce", cfg, rng,
                              [&](Rng& r) { return CeTrial(r, cfg); }));
  reports.push_back(RunTrials("panoptic_loss", cfg, rng,
                              [&](Rng& r) { return PanopticTrial(r, cfg); }));
  reports.push_back(RunTrials("photometric_error", cfg, rng,
                              [&](Rng& r) { return PhotometricTrial(r, cfg); }));
  reports.push_back(RunTrials("masked_photometric_loss", cfg, rng, [&](Rng& r) {
    return DepthTrial(depth, DepthTerm::kPhotometric, r, cfg);
  }));
  reports.push_back(RunTrials("smoothness_loss", cfg, rng, [&](Rng& r) {
    return DepthTrial(depth, DepthTerm::kSmoothness, r, cfg);
  }));
  reports.push_back(RunTrials("depth_loss", cfg, rng, [&](Rng& r) {
    return DepthTrial(depth, DepthTerm::kTotal, r, cfg);
  }));
  reports.push_back(RunTrials("combined_loss", cfg, rng,
                              [&](Rng& r) { return CombinedTrial(r, cfg); }));
  return reports;
}

}  // namespace panodepth
