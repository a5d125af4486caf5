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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "panodepth/error.h"
#include "panodepth/image_io.h"
#include "panodepth/serialization.h"

namespace panodepth {
namespace {

namespace fs = std::filesystem;

std::string TempPath(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / "panodepth_io_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

TEST(ImageIo, Pnm8RoundTrip) {
  ImageGrid g(5, 7);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 7; ++c) g(r, c) = (r * 7 + c) / 255.0;
  WritePnm8(TempPath("a.pgm"), g);
  const ImageGrid back = ReadPnm8(TempPath("a.pgm"));
  ASSERT_TRUE(back.SameShape(g));
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(back.data()[i], g.data()[i], 1e-12);

  ImageGrid rgb(3, 4, 3, 0.5);
  rgb(1, 2, 1) = 1.0;
  WritePnm8(TempPath("b.ppm"), rgb);
  const ImageGrid rgb_back = ReadPnm8(TempPath("b.ppm"));
  EXPECT_EQ(rgb_back.channels(), 3);
  EXPECT_EQ(rgb_back(1, 2, 1), 1.0);
  EXPECT_NEAR(rgb_back(0, 0, 0), 128.0 / 255.0, 1e-12);
}

TEST(ImageIo, Pgm16RoundTrip) {
  LabelGrid g(4, 6);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = static_cast<int>(i * 997 % 65536);
  WritePgm16(TempPath("l.pgm"), g);
  const LabelGrid back = ReadPgm16(TempPath("l.pgm"));
  EXPECT_TRUE(std::equal(g.data().begin(), g.data().end(), back.data().begin()));
  LabelGrid neg(1, 1, 1, -1);
  EXPECT_THROW(WritePgm16(TempPath("n.pgm"), neg), Error);
}

TEST(ImageIo, PfmRoundTripAndOrientation) {
  ImageGrid g(3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = 0.5f * r + 0.125f * c;
  WritePfm(TempPath("d.pfm"), g);
  const ImageGrid back = ReadPfm(TempPath("d.pfm"));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.data()[i], g.data()[i]);
  // Bottom row first: the first float in the payload is g(2, 0) = 1.0.
  std::ifstream is(TempPath("d.pfm"), std::ios::binary);
  std::string magic, dims, scale;
  is >> magic;
  std::getline(is, dims);
  std::getline(is, dims);
  std::getline(is, scale);
  EXPECT_EQ(magic, "Pf");
  EXPECT_EQ(scale, "-1.0");
  float first = 0.0f;
  is.read(reinterpret_cast<char*>(&first), 4);
  EXPECT_EQ(first, 1.0f);

  ImageGrid off(2, 3, 2);
  off(1, 2, 0) = -3.5;
  off(1, 2, 1) = 4.25;
  WritePfm(TempPath("o.pfm"), off);
  const ImageGrid off_back = ReadPfm2(TempPath("o.pfm"));
  EXPECT_EQ(off_back.channels(), 2);
  EXPECT_EQ(off_back(1, 2, 0), -3.5);
  EXPECT_EQ(off_back(1, 2, 1), 4.25);
}

TEST(ImageIo, MaskRoundTrip) {
  ValidMask m = MakeMask(3, 3, false);
  m(1, 1) = 1;
  WriteMask(TempPath("m.pgm"), m);
  const ValidMask back = ReadMask(TempPath("m.pgm"));
  EXPECT_EQ(CountSet(back), 1u);
  EXPECT_EQ(back(1, 1), 1);
}

TEST(ImageIo, Errors) {
  try {
    ReadPfm(TempPath("missing.pfm"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  std::ofstream(TempPath("junk.pgm")) << "P9\n1 1\n255\n";
  EXPECT_THROW(ReadPnm8(TempPath("junk.pgm")), Error);
  std::ofstream(TempPath("short.pgm"), std::ios::binary) << "P5\n4 4\n255\nab";
  EXPECT_THROW(ReadPnm8(TempPath("short.pgm")), Error);
}

TEST(ImageIo, HeaderComments) {
  std::ofstream(TempPath("c.pgm"), std::ios::binary)
      << "P5\n# a comment\n2 1\n# another\n255\n" << char(0) << char(255);
  const ImageGrid g = ReadPnm8(TempPath("c.pgm"));
  EXPECT_EQ(g.width(), 2);
  EXPECT_EQ(g(0, 1), 1.0);
}

TEST(Serialization, IntrinsicsAndPose) {
  const Intrinsics k{100.0, 101.0, 50.0, 40.0, 128, 96};
  const Json j = k;
  EXPECT_EQ(j.at("fx"), 100.0);
  EXPECT_EQ(j.at("width"), 128);
  const Intrinsics back = j.get<Intrinsics>();
  EXPECT_EQ(back.fy, 101.0);
  EXPECT_EQ(back.height, 96);

  const PoseSE3 pose = PoseFromAxisAngle({0.1, 0.2, -0.3}, {1.0, -2.0, 0.5});
  const Json jp = pose;
  ASSERT_EQ(jp.at("rotation").size(), 9u);
  EXPECT_EQ(jp.at("rotation")[1], pose.rotation(0, 1));
  const PoseSE3 pb = jp.get<PoseSE3>();
  EXPECT_EQ(pb.rotation, pose.rotation);
  EXPECT_EQ(pb.translation, pose.translation);

  Json bad = jp;
  bad["rotation"][0] = 5.0;
  EXPECT_THROW(bad.get<PoseSE3>(), Error);
}

TEST(Serialization, ConfigsWithDefaults) {
  const PhotometricConfig pc = Json::parse("{}").get<PhotometricConfig>();
  EXPECT_EQ(pc.alpha, 0.85);
  EXPECT_EQ(pc.ssim_window, 3);
  EXPECT_EQ(pc.c1, 1e-4);
  EXPECT_EQ(pc.c2, 9e-4);
  const Json jpc = pc;
  EXPECT_EQ(jpc.at("alpha"), 0.85);

  UncertaintyParams u;
  u.s = {0.1, 0.2, 0.3, 0.4, 0.5};
  const Json ju = u;
  EXPECT_EQ(ju.dump(), R"({"s":[0.1,0.2,0.3,0.4,0.5]})");
  EXPECT_EQ(ju.get<UncertaintyParams>().s, u.s);
  EXPECT_THROW(ParseJson<UncertaintyParams>(Json::parse(R"({"s":[1,2]})"),
                                           "uncertainty"),
               Error);

  BootstrapConfig bc;
  bc.top_fraction = 0.3;
  EXPECT_EQ(Json(bc).get<BootstrapConfig>().top_fraction, 0.3);
}

TEST(Serialization, TaxonomyAndScene) {
  const Taxonomy t = DefaultTaxonomy();
  const Json jt = t;
  EXPECT_EQ(jt.get<Taxonomy>(), t);

  SceneSpec spec;
  spec.intrinsics = {50.0, 50.0, 31.5, 10.0, 64, 48};
  spec.boxes.push_back({{0.0, 1.0, 8.0}, {2.0, 1.0, 3.0}, kCar, 0.7});
  spec.noise_sigma = 0.01;
  const Json js = spec;
  const SceneSpec back = js.get<SceneSpec>();
  EXPECT_EQ(back.intrinsics.width, 64);
  ASSERT_EQ(back.boxes.size(), 1u);
  EXPECT_EQ(back.boxes[0].center.z, 8.0);
  EXPECT_EQ(back.boxes[0].class_id, kCar);
  EXPECT_EQ(back.noise_sigma, 0.01);
  EXPECT_EQ(back.taxonomy, spec.taxonomy);
  EXPECT_EQ(Json(back), js);
}

TEST(Serialization, FileErrors) {
  std::ofstream(TempPath("bad.json")) << "{ not json";
  try {
    ReadJsonFile(TempPath("bad.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  EXPECT_THROW(ReadJsonFile(TempPath("nope.json")), Error);
  WriteJsonFile(TempPath("ok.json"), Json{{"a", 1}});
  EXPECT_EQ(ReadJsonFile(TempPath("ok.json")).at("a"), 1);
  EXPECT_THROW(ParseJson<Intrinsics>(Json{{"fx", "x"}}, "intrinsics"), Error);
}

}  // namespace
}  // namespace panodepth
