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
// panodepth command-line entry point.
//
//   panodepth synth      --config scene.json --out frame/
//   panodepth pipeline   --input frame/ --out result/
//   panodepth scale      --input frame/
//   panodepth losses     --input frame/
//   panodepth eval-pq    --gt frame/ --pred result/
//   panodepth eval-depth --gt frame/depth.pfm --pred result/depth.pfm
//   panodepth gradcheck  --trials 100
//
// Reports are JSON on stdout (and report.json under --out). --pretty swaps
// the JSON for a fixed-order table.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "frame_dir.h"
#include "panodepth/camera.h"
#include "panodepth/depth_losses.h"
#include "panodepth/error.h"
#include "panodepth/evaluation.h"
#include "panodepth/geometric_scaling.h"
#include "panodepth/gradcheck.h"
#include "panodepth/image_io.h"
#include "panodepth/multitask.h"
#include "panodepth/panoptic_losses.h"
#include "panodepth/postprocess.h"
#include "panodepth/serialization.h"
#include "panodepth/synthetic.h"

namespace panodepth::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

constexpr double kSoftTargetMs = 100.0;

struct RunConfig {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool pretty = false;

  std::string input;
  std::string gt;
  std::string pred;
  std::string depth;
  std::optional<double> camera_height;
  std::vector<std::int32_t> excluded;
  bool has_excluded = false;

  double relative_scale = 1.0;
  std::string selection = "road";
  std::string normals = "estimated";
  double cap = kDepthCap;
  int trials = 100;
};

// One row of a --pretty table.
struct Row {
  std::string key;
  std::string value;
};

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void PrintTable(const std::vector<Row>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.key.size());
  for (const auto& r : rows) {
    std::cout << r.key << std::string(width - r.key.size() + 2, ' ') << r.value
              << "\n";
  }
}

void Emit(const RunConfig& rc, const Json& report, const std::vector<Row>& rows) {
  if (!rc.out.empty()) WriteJsonFile(OutputDir(rc.out).Path(kReport), report);
  if (rc.pretty) {
    PrintTable(rows);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

Json ConfigOrEmpty(const RunConfig& rc) {
  if (rc.config.empty()) return Json::object();
  Json j = ReadJsonFile(rc.config);
  if (!j.is_object()) Fail(ErrorCode::kIo, "config must be a JSON object: " + rc.config);
  return j;
}

Json PoseJsonOr(const Json& j, const char* key, const PoseSE3& fallback) {
  return j.contains(key) ? j.at(key) : Json(fallback);
}

CameraRig ResolveRig(const RunConfig& rc, const FrameDir& dir) {
  CameraRig rig;
  if (dir.Has(kRig)) rig = dir.ReadRig();
  if (rc.camera_height) rig.height_m = *rc.camera_height;
  if (!dir.Has(kRig) && !rc.camera_height)
    Fail(ErrorCode::kIo, "missing " + dir.Path(kRig) + " and no --camera-height");
  if (!(rig.height_m > 0.0)) Fail(ErrorCode::kContractViolation, "camera height must be positive");
  return rig;
}

ScaleOptions ResolveScaleOptions(const RunConfig& rc) {
  ScaleOptions o;
  o.selection = rc.selection == "normal" ? GroundSelection::kNormalOnly
                                         : GroundSelection::kPanopticRoad;
  o.normal_source =
      rc.normals == "ideal" ? NormalSource::kIdeal : NormalSource::kEstimated;
  return o;
}

Json ScaleJson(const ScaleEstimate& s, const CameraRig& rig) {
  return {{"factor", s.factor},
          {"median_height", s.median_height},
          {"ground_points", s.ground_points},
          {"camera_height", rig.height_m}};
}

// ---------------------------------------------------------------------------

int RunSynth(const RunConfig& rc) {
  if (rc.config.empty()) Fail(ErrorCode::kIo, "synth needs --config <scene.json>");
  if (rc.out.empty()) Fail(ErrorCode::kIo, "synth needs --out <dir>");
  if (!(rc.relative_scale > 0.0))
    Fail(ErrorCode::kContractViolation, "--relative-scale must be positive");
  const Json cfg = ReadJsonFile(rc.config);
  const SceneSpec spec = ParseJson<SceneSpec>(cfg, "scene");
  spec.Validate();
  // Default motion: the previous camera 0.5 m behind, the next 0.5 m ahead.
  const PoseSE3 to_prev = ParseJson<PoseSE3>(
      PoseJsonOr(cfg, "to_prev", PoseFromAxisAngle({0, 0, 0}, {0, 0, 0.5})),
      "to_prev");
  const PoseSE3 to_next = ParseJson<PoseSE3>(
      PoseJsonOr(cfg, "to_next", PoseFromAxisAngle({0, 0, 0}, {0, 0, -0.5})),
      "to_next");

  const RenderedPair prev = RenderPair(spec, PoseSE3::Identity(), to_prev, rc.seed);
  const RenderedPair next = RenderPair(spec, PoseSE3::Identity(), to_next, rc.seed);
  const RenderedFrame& frame = prev.target;
  const PanopticTargets targets = BuildPanopticTargets(frame.panoptic, {});

  const FrameDir out = OutputDir(rc.out);
  WritePnm8(out.Path(kImage), frame.image);
  WritePnm8(out.Path(kPrev), prev.source.image);
  WritePnm8(out.Path(kNext), next.source.image);
  WritePfm(out.Path(kDepth), frame.depth);
  WritePfm(out.Path(kRelativeDepth), ScaleDepth(frame.depth, 1.0 / rc.relative_scale));
  out.WritePanoptic(frame.panoptic);
  WritePfm(out.Path(kHeatmap), targets.heatmap);
  WritePfm(out.Path(kOffsets), targets.offsets);
  WriteJsonFile(out.Path(kIntrinsics), spec.intrinsics);
  WriteJsonFile(out.Path(kRig),
                {{"camera_height", spec.rig.height_m},
                 {"ground_normal",
                  {spec.rig.ground_normal.x, spec.rig.ground_normal.y,
                   spec.rig.ground_normal.z}}});
  WriteJsonFile(out.Path(kPoses), {{"to_prev", to_prev}, {"to_next", to_next}});

  std::int32_t instances = 0;
  for (auto id : frame.panoptic.instance.data()) instances = std::max(instances, id);
  const Json report = {
      {"subcommand", "synth"},
      {"width", spec.intrinsics.width},
      {"height", spec.intrinsics.height},
      {"valid_pixels", CountSet(frame.valid)},
      {"instances", instances},
      {"relative_scale", rc.relative_scale},
      {"seed", rc.seed},
      {"files",
       {kImage, kPrev, kNext, kDepth, kRelativeDepth, kSemantic, kInstance,
        kTaxonomy, kHeatmap, kOffsets, kIntrinsics, kRig, kPoses}}};
  Emit(rc, report,
       {{"width", std::to_string(spec.intrinsics.width)},
        {"height", std::to_string(spec.intrinsics.height)},
        {"valid_pixels", std::to_string(CountSet(frame.valid))},
        {"instances", std::to_string(instances)}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

int RunPipeline(const RunConfig& rc) {
  if (rc.input.empty()) Fail(ErrorCode::kIo, "pipeline needs --input <dir>");
  if (rc.out.empty()) Fail(ErrorCode::kIo, "pipeline needs --out <dir>");
  const FrameDir in(rc.input);
  const std::string depth_name = rc.depth.empty() ? kRelativeDepth : rc.depth;
  in.RequireFiles({kHeatmap, kOffsets, kSemantic, kTaxonomy, kIntrinsics, depth_name});
  const Json cfg = ConfigOrEmpty(rc);
  PostprocessConfig pp;
  pp.nms_kernel = cfg.value("nms_kernel", pp.nms_kernel);
  pp.nms_threshold = cfg.value("nms_threshold", pp.nms_threshold);

  const Taxonomy taxonomy = in.ReadTaxonomy();
  const Intrinsics k = in.ReadIntrinsics();
  const CameraRig rig = ResolveRig(rc, in);
  const ImageGrid heatmap = in.Depth(kHeatmap);
  const ImageGrid offsets = in.Offsets();
  const LabelGrid semantic = in.Labels(kSemantic);
  const ImageGrid relative = in.Depth(depth_name);
  Require(relative.height() == k.height && relative.width() == k.width,
          "depth does not match intrinsics");

  const PostprocessResult post =
      PostprocessPanoptic(heatmap, offsets, semantic, taxonomy, pp);
  const ScaleEstimate scale =
      EstimateScale(relative, post.panoptic, k, rig, ResolveScaleOptions(rc));
  const ImageGrid metric = ScaleDepth(relative, scale.factor);
  const std::set<std::int32_t> excluded =
      rc.has_excluded ? std::set<std::int32_t>(rc.excluded.begin(), rc.excluded.end())
                      : DefaultExcludedClasses(taxonomy);
  const LabeledPointCloud cloud = ProjectLabeled(post.panoptic, metric, k, excluded);

  const FrameDir out = OutputDir(rc.out);
  out.WritePanoptic(post.panoptic);
  WritePfm(out.Path(kDepth), metric);
  WritePly(out.Path(kCloud), cloud, {scale.factor, rig.height_m});

  Json pq = nullptr;
  std::optional<PQResult> pq_result;
  if (in.Has(kInstance)) {
    pq_result = PanopticQuality(post.panoptic, in.Panoptic());
    pq = *pq_result;
  }
  std::int32_t instances = 0;
  for (auto id : post.panoptic.instance.data()) instances = std::max(instances, id);
  const Json report = {{"subcommand", "pipeline"},
                       {"keypoints", post.keypoints.size()},
                       {"instances", instances},
                       {"scale", ScaleJson(scale, rig)},
                       {"points", cloud.points.size()},
                       {"pq_vs_oracle", pq},
                       {"files", {kSemantic, kInstance, kTaxonomy, kDepth, kCloud}}};

  const PostprocessTimings& t = post.timings;
  std::vector<Row> rows = {
      {"size", std::to_string(k.width) + "x" + std::to_string(k.height)},
      {"keypoints", std::to_string(post.keypoints.size())},
      {"instances", std::to_string(instances)},
      {"scale_factor", Fixed(scale.factor, 9)},
      {"median_height_m", Fixed(scale.median_height, 9)},
      {"ground_points", std::to_string(scale.ground_points)},
      {"points", std::to_string(cloud.points.size())},
      {"pq_vs_oracle", pq_result ? Fixed(pq_result->pq) : std::string("n/a")},
      {"nms_ms", Fixed(t.nms_ms, 3)},
      {"grouping_ms", Fixed(t.grouping_ms, 3)},
      {"fusion_ms", Fixed(t.fusion_ms, 3)},
      {"postprocess_ms", Fixed(t.total_ms(), 3) + " (soft target <= " +
                             Fixed(kSoftTargetMs, 0) + " ms: " +
                             (t.total_ms() <= kSoftTargetMs ? "met" : "missed") + ")"}};
  Emit(rc, report, rows);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int RunScale(const RunConfig& rc) {
  if (rc.input.empty()) Fail(ErrorCode::kIo, "scale needs --input <dir>");
  const FrameDir in(rc.input);
  const std::string depth_name = rc.depth.empty() ? kRelativeDepth : rc.depth;
  in.RequireFiles({kSemantic, kInstance, kTaxonomy, kIntrinsics, depth_name});
  const Intrinsics k = in.ReadIntrinsics();
  const CameraRig rig = ResolveRig(rc, in);
  const ScaleEstimate s = EstimateScale(in.Depth(depth_name), in.Panoptic(), k,
                                        rig, ResolveScaleOptions(rc));
  Json report = ScaleJson(s, rig);
  report["subcommand"] = "scale";
  report["selection"] = rc.selection;
  report["normals"] = rc.normals;
  Emit(rc, report,
       {{"factor", Fixed(s.factor, 9)},
        {"median_height_m", Fixed(s.median_height, 9)},
        {"ground_points", std::to_string(s.ground_points)},
        {"camera_height_m", Fixed(rig.height_m, 6)},
        {"selection", rc.selection},
        {"normals", rc.normals}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

// Label-smoothed one-hot probabilities from a hard semantic prediction.
ImageGrid SmoothedProbabilities(const LabelGrid& semantic, int classes,
                                double smoothing) {
  ImageGrid p(semantic.height(), semantic.width(), classes, smoothing / classes);
  for (int r = 0; r < semantic.height(); ++r) {
    for (int c = 0; c < semantic.width(); ++c) {
      const std::int32_t y = semantic(r, c);
      if (y >= 0 && y < classes) p(r, c, y) += 1.0 - smoothing;
      else
        for (int q = 0; q < classes; ++q) p(r, c, q) = 1.0 / classes;
    }
  }
  return p;
}

int RunLosses(const RunConfig& rc) {
  if (rc.input.empty()) Fail(ErrorCode::kIo, "losses needs --input <dir>");
  const FrameDir in(rc.input);
  const std::string depth_name = rc.depth.empty() ? kDepth : rc.depth;
  in.RequireFiles({kImage, kPrev, kNext, kPoses, kIntrinsics, kSemantic, kInstance,
                   kTaxonomy, kHeatmap, kOffsets, depth_name});
  const Json cfg = ConfigOrEmpty(rc);
  const PhotometricConfig photometric = ParseJson<PhotometricConfig>(
      cfg.value("photometric", Json::object()), "photometric config");
  photometric.Validate();
  const BootstrapConfig bootstrap = ParseJson<BootstrapConfig>(
      cfg.value("bootstrap", Json::object()), "bootstrap config");
  bootstrap.Validate();
  UncertaintyParams uncertainty;
  if (cfg.contains("uncertainty"))
    uncertainty = ParseJson<UncertaintyParams>(cfg.at("uncertainty"), "uncertainty");
  const double smoothing = cfg.value("label_smoothing", 0.1);
  Require(smoothing > 0.0 && smoothing < 1.0, "label_smoothing must lie in (0, 1)");

  const Intrinsics k = in.ReadIntrinsics();
  const Json poses = ReadJsonFile(in.Path(kPoses));
  const PoseSE3 to_prev = ParseJson<PoseSE3>(poses.value("to_prev", Json()), "to_prev");
  const PoseSE3 to_next = ParseJson<PoseSE3>(poses.value("to_next", Json()), "to_next");
  const ImageGrid image = in.Image(kImage);
  const ImageGrid prev = in.Image(kPrev);
  const ImageGrid next = in.Image(kNext);
  ImageGrid depth = in.Depth(depth_name);
  Require(depth.height() == k.height && depth.width() == k.width,
          "depth does not match intrinsics");
  RequireSameShape(image, prev, "image vs prev");
  RequireSameShape(image, next, "image vs next");
  RequireSameShape(image, depth, "image vs depth");
  // Invalid depth (sky) takes the far clamp so every pixel back-projects.
  for (auto& d : depth.data())
    if (!(d > 0.0) || !std::isfinite(d)) d = kDefaultMaxDepth;

  ReprojectionSet<double> set;
  set.target = image;
  for (const auto& [src, pose] : {std::pair{&prev, &to_prev}, std::pair{&next, &to_next}}) {
    SampledImage<double> w = WarpFrame(*src, depth, *pose, k);
    set.warped.push_back({std::move(w.image), std::move(w.valid)});
  }
  set.context = {prev, next};
  const std::vector<ReprojectionSet<double>> sets = {set};
  const MultiScaleDepth<double> scales = {depth};
  const double phot = MaskedPhotometricLoss(sets, photometric);
  const double smooth = SmoothnessLoss(scales, image);
  const double depth_loss = DepthLoss(sets, scales, image, photometric);

  const PanopticMap gt = in.Panoptic();
  const PanopticTargets targets = BuildPanopticTargets(gt, bootstrap);
  const ImageGrid probs =
      SmoothedProbabilities(gt.semantic, gt.taxonomy.NumClasses(), smoothing);
  const double seg =
      BootstrappedCrossEntropy(probs, targets.semantic, targets.weights, bootstrap);
  const double mse = HeatmapMse(in.Depth(kHeatmap), targets.heatmap);
  const double l1 = OffsetL1(in.Offsets(), targets.offsets, targets.thing_mask);
  const double panoptic = PanopticLoss(seg, mse, l1);
  const LossComponents<double> parts{seg, mse, l1, phot, smooth};
  const double combined = CombinedLoss(parts, uncertainty);

  const Json report = {{"subcommand", "losses"},
                       {"seg", seg},
                       {"mse", mse},
                       {"l1", l1},
                       {"panoptic", panoptic},
                       {"phot", phot},
                       {"smooth", smooth},
                       {"depth", depth_loss},
                       {"combined", combined},
                       {"uncertainty", uncertainty}};
  Emit(rc, report,
       {{"seg", Fixed(seg, 9)},
        {"mse", Fixed(mse, 9)},
        {"l1", Fixed(l1, 9)},
        {"panoptic", Fixed(panoptic, 9)},
        {"phot", Fixed(phot, 9)},
        {"smooth", Fixed(smooth, 9)},
        {"depth", Fixed(depth_loss, 9)},
        {"combined", Fixed(combined, 9)}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

int RunEvalPq(const RunConfig& rc) {
  if (rc.gt.empty() || rc.pred.empty())
    Fail(ErrorCode::kIo, "eval-pq needs --gt <dir> and --pred <dir>");
  const FrameDir gt_dir(rc.gt), pred_dir(rc.pred);
  gt_dir.RequireFiles({kSemantic, kInstance, kTaxonomy});
  pred_dir.RequireFiles({kSemantic, kInstance, kTaxonomy});
  const PQResult r = PanopticQuality(pred_dir.Panoptic(), gt_dir.Panoptic());
  Json report = r;
  report["subcommand"] = "eval-pq";
  std::vector<Row> rows = {{"pq", Fixed(r.pq)},
                           {"sq", Fixed(r.sq)},
                           {"rq", Fixed(r.rq)},
                           {"pq_things", Fixed(r.pq_things)},
                           {"pq_stuff", Fixed(r.pq_stuff)},
                           {"tp", std::to_string(r.tp)},
                           {"fp", std::to_string(r.fp)},
                           {"fn", std::to_string(r.fn)}};
  for (const auto& [id, c] : r.per_class) {
    rows.push_back({"class " + std::to_string(id),
                    "pq " + Fixed(c.pq) + "  sq " + Fixed(c.sq) + "  rq " + Fixed(c.rq)});
  }
  Emit(rc, report, rows);
  return kExitOk;
}

int RunEvalDepth(const RunConfig& rc) {
  if (rc.gt.empty() || rc.pred.empty())
    Fail(ErrorCode::kIo, "eval-depth needs --gt <pfm> and --pred <pfm>");
  for (const auto& p : {rc.gt, rc.pred})
    if (!fs::is_regular_file(p)) Fail(ErrorCode::kIo, "missing input file: " + p);
  ImageGrid gt = ReadPfm(rc.gt);
  ImageGrid pred = ReadPfm(rc.pred);
  RequireSameShape(pred, gt, "pred vs gt depth");
  ValidMask valid = MakeMask(gt.height(), gt.width(), false);
  for (std::size_t i = 0; i < gt.size(); ++i)
    valid.data()[i] = gt.data()[i] > 0.0 && std::isfinite(gt.data()[i]);
  const DepthMetrics m = ComputeDepthMetrics(pred, gt, valid, rc.cap);
  Json report = m;
  report["subcommand"] = "eval-depth";
  report["cap"] = rc.cap;
  Emit(rc, report,
       {{"abs_rel", Fixed(m.abs_rel)},
        {"rmse", Fixed(m.rmse)},
        {"delta1", Fixed(m.delta1)},
        {"delta2", Fixed(m.delta2)},
        {"delta3", Fixed(m.delta3)},
        {"count", std::to_string(m.count)}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

int RunGradcheck(const RunConfig& rc) {
  const Json cfg = ConfigOrEmpty(rc);
  GradcheckConfig gc;
  gc.trials = rc.trials;
  gc.seed = rc.seed;
  gc.step = cfg.value("step", gc.step);
  gc.tolerance = cfg.value("tolerance", gc.tolerance);
  gc.kink_margin = cfg.value("kink_margin", gc.kink_margin);
  Require(gc.trials > 0, "--trials must be positive");
  const std::vector<GradcheckReport> reports = RunGradientSuite(gc);
  Json losses = Json::array();
  std::vector<Row> rows;
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.passed();
    losses.push_back({{"name", r.name},
                      {"trials", r.trials},
                      {"rejected", r.rejected},
                      {"failures", r.failures},
                      {"max_rel_error", r.max_rel_error},
                      {"passed", r.passed()}});
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s  trials %d  rejected %d  max_rel %.3e",
                  r.passed() ? "PASS" : "FAIL", r.trials, r.rejected, r.max_rel_error);
    rows.push_back({r.name, buf});
  }
  const Json report = {{"subcommand", "gradcheck"},
                       {"seed", gc.seed},
                       {"tolerance", gc.tolerance},
                       {"step", gc.step},
                       {"passed", all},
                       {"losses", losses}};
  Emit(rc, report, rows);
  if (!all) {
    std::cerr << "panodepth: error: gradient check failed\n";
    return kExitError;
  }
  return kExitOk;
}

std::string OneLine(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int Dispatch(int argc, char** argv) {
  CLI::App app{"panodepth: panoptic and depth post-processing, losses and metrics"};
  app.require_subcommand(1);
  RunConfig rc;

  auto common = [&rc](CLI::App* sub) {
    sub->add_option("--config", rc.config, "JSON configuration file");
    sub->add_option("--out", rc.out, "Output directory");
    sub->add_option("--seed", rc.seed, "Random seed");
    sub->add_flag("--pretty", rc.pretty, "Print a table instead of JSON");
  };
  auto frame_inputs = [&rc](CLI::App* sub) {
    sub->add_option("--input", rc.input, "Frame directory")->required();
    sub->add_option("--depth", rc.depth, "Depth file name inside the frame directory");
    sub->add_option("--camera-height", rc.camera_height, "Camera height in meters");
    sub->add_option("--selection", rc.selection, "Ground selection")
        ->check(CLI::IsMember({"road", "normal"}));
    sub->add_option("--normals", rc.normals, "Normal source")
        ->check(CLI::IsMember({"estimated", "ideal"}));
  };

  CLI::App* synth = app.add_subcommand("synth", "Render a synthetic frame triple");
  common(synth);
  synth->add_option("--relative-scale", rc.relative_scale,
                    "Divide depth by this for relative_depth.pfm");

  CLI::App* pipeline = app.add_subcommand("pipeline", "Post-process, scale and project");
  common(pipeline);
  frame_inputs(pipeline);
  pipeline->add_option("--exclude", rc.excluded, "Class ids left out of the cloud")
      ->each([&rc](const std::string&) { rc.has_excluded = true; });

  CLI::App* scale = app.add_subcommand("scale", "Ground-plane depth scale factor");
  common(scale);
  frame_inputs(scale);

  CLI::App* losses = app.add_subcommand("losses", "Evaluate every loss term");
  common(losses);
  losses->add_option("--input", rc.input, "Frame directory")->required();
  losses->add_option("--depth", rc.depth, "Depth file name inside the frame directory");

  CLI::App* eval_pq = app.add_subcommand("eval-pq", "Panoptic quality");
  common(eval_pq);
  eval_pq->add_option("--gt", rc.gt, "Ground-truth frame directory")->required();
  eval_pq->add_option("--pred", rc.pred, "Predicted frame directory")->required();

  CLI::App* eval_depth = app.add_subcommand("eval-depth", "Depth metrics");
  common(eval_depth);
  eval_depth->add_option("--gt", rc.gt, "Ground-truth depth PFM")->required();
  eval_depth->add_option("--pred", rc.pred, "Predicted depth PFM")->required();
  eval_depth->add_option("--cap", rc.cap, "Maximum evaluated depth");

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Dual vs finite-difference check");
  common(gradcheck);
  gradcheck->add_option("--trials", rc.trials, "Trials per loss");

  if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
    std::cerr << "panodepth: usage error: unknown subcommand: " << argv[1] << "\n";
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "panodepth: usage error: " << OneLine(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return RunSynth(rc);
    if (pipeline->parsed()) return RunPipeline(rc);
    if (scale->parsed()) return RunScale(rc);
    if (losses->parsed()) return RunLosses(rc);
    if (eval_pq->parsed()) return RunEvalPq(rc);
    if (eval_depth->parsed()) return RunEvalDepth(rc);
    if (gradcheck->parsed()) return RunGradcheck(rc);
  } catch (const std::exception& e) {
    std::cerr << "panodepth: error: " << OneLine(e.what()) << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace panodepth::cli

int main(int argc, char** argv) { return panodepth::cli::Dispatch(argc, argv); }
