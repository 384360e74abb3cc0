// Copyright 2026 The forensic-eval Authors.
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

#include <cmath>
#include <cstring>
#include <random>

#include "forensic_eval/error.hpp"
#include "forensic_eval/image_io.hpp"
#include "forensic_eval/manifest.hpp"
#include "forensic_eval/report.hpp"
#include "forensic_eval/shape_transform.hpp"
#include "test_support.hpp"

namespace fe {
namespace {

using testing::TempDir;

constexpr const char* kTwoSamples = R"({
  "dataset": "toy",
  "samples": [
    {"id": "a", "image": "images/a.png", "mask": null, "label": 0},
    {"id": "b", "image": "images/b.png", "mask": "masks/b.png", "label": 1}
  ]
})";

TEST(Manifest, LoadsTwoSamplesInOrder) {
  const Manifest m = parse_manifest(kTwoSamples, "/data");
  ASSERT_EQ(m.samples.size(), 2u);
  EXPECT_EQ(m.dataset, "toy");
  EXPECT_EQ(m.samples[0].id, "a");
  EXPECT_EQ(m.samples[0].label, Label::authentic);
  EXPECT_FALSE(m.samples[0].mask);
  EXPECT_EQ(m.samples[1].label, Label::manipulated);
  EXPECT_EQ(*m.samples[1].mask, "masks/b.png");
  EXPECT_EQ(m.resolve(m.samples[1].image), std::filesystem::path("/data/images/b.png"));
  EXPECT_EQ(m.manipulated_count(), 1u);
}

TEST(Manifest, RejectsDuplicateId) {
  constexpr const char* text = R"({"dataset": "d", "samples": [
    {"id": "a", "image": "x.png", "mask": null, "label": 0},
    {"id": "a", "image": "y.png", "mask": null, "label": 0}]})";
  try {
    parse_manifest(text, ".");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_NE(e.violations()[0].find("duplicate id"), std::string::npos);
  }
}

TEST(Manifest, RejectsManipulatedWithoutMask) {
  constexpr const char* text = R"({"dataset": "d", "samples": [
    {"id": "a", "image": "x.png", "mask": null, "label": 1}]})";
  EXPECT_THROW(parse_manifest(text, "."), ValidationError);
}

TEST(Manifest, RejectsAuthenticWithMask) {
  constexpr const char* text = R"({"dataset": "d", "samples": [
    {"id": "a", "image": "x.png", "mask": "m.png", "label": 0}]})";
  EXPECT_THROW(parse_manifest(text, "."), ValidationError);
}

TEST(Manifest, RejectsMissingFieldAndBadLabel) {
  constexpr const char* text = R"({"dataset": "d", "samples": [
    {"id": "a", "mask": null, "label": 0},
    {"id": "b", "image": "b.png", "mask": null, "label": 2}]})";
  try {
    parse_manifest(text, ".");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
}

TEST(Manifest, MalformedJsonIsParseError) {
  EXPECT_THROW(parse_manifest("{\"dataset\": ", "."), ParseError);
}

TEST(Manifest, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Manifest m;
    m.dataset = "set" + std::to_string(trial);
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      SampleRecord s;
      s.id = "id_" + std::to_string(rng() % 1000000) + "_" + std::to_string(i);
      s.image = "img/" + s.id + ".jpg";
      if (rng() % 2) {
        s.label = Label::manipulated;
        s.mask = "gt/" + s.id + ".png";
      }
      m.samples.push_back(s);
    }
    TempDir dir("manifest");
    m.base_dir = dir.path();
    save_manifest(m, dir.path() / "manifest.json");
    EXPECT_EQ(load_manifest(dir.path() / "manifest.json"), m);
  }
}

TEST(Manifest, ValidateReportsMissingFiles) {
  TempDir dir("manifest_files");
  Manifest m = parse_manifest(kTwoSamples, dir.path());
  EXPECT_TRUE(validate_manifest(m).empty());
  EXPECT_EQ(validate_manifest(m, true).size(), 3u);
}

GrayImage filled(int w, int h, std::uint8_t v) { return GrayImage(w, h, v); }

TEST(DecodeMask, WhiteAndBlack) {
  EXPECT_EQ(decode_mask(encode_png(filled(4, 4, 255))).popcount(), 16u);
  EXPECT_EQ(decode_mask(encode_png(filled(4, 4, 0))).popcount(), 0u);
}

TEST(DecodeMask, CheckerboardMatchesPixelLoop) {
  GrayImage img(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) *img.pixel(x, y) = ((x + y) % 2) ? 255 : 0;
  }
  const BinaryMask m = decode_mask(encode_png(img));
  std::size_t expected = 0;
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const bool bit = *img.pixel(x, y) / 255.0 >= 0.5;
      expected += bit;
      EXPECT_EQ(m.test(x, y), bit);
    }
  }
  EXPECT_EQ(m.popcount(), expected);
  EXPECT_EQ(m.popcount(), 8u);
}

TEST(DecodeMask, RgbCollapsesToLumaAndThresholdApplies) {
  RgbImage img(2, 1);
  // Pure red: luma = 76 -> 0.298 < 0.5. Pure green: luma = 150 -> 0.588.
  img.data = {255, 0, 0, 0, 255, 0};
  const BinaryMask m = decode_mask(encode_png(img));
  EXPECT_FALSE(m.test(0, 0));
  EXPECT_TRUE(m.test(1, 0));
  EXPECT_TRUE(decode_mask(encode_png(img), 0.25).test(0, 0));
}

TEST(DecodeMask, ReDecodingBinaryImageIsIdempotent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryMask m = testing::random_mask(rng, 17, 9);
    const BinaryMask once = decode_mask(encode_png(m));
    EXPECT_EQ(once, m);
    EXPECT_EQ(decode_mask(encode_png(once)), once);
  }
}

TEST(DecodeMask, RejectsGarbage) {
  const std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5};
  EXPECT_THROW(decode_mask(junk), DecodeError);
  auto png = encode_png(filled(8, 8, 255));
  png.resize(png.size() / 2);
  EXPECT_THROW(decode_mask(png), DecodeError);
}

TEST(DecodeMask, JpegInput) {
  RgbImage white(16, 16, 255);
  EXPECT_EQ(decode_mask(encode_jpeg(white, 90)).popcount(), 256u);
}

TEST(DecodeScoremap, EightBitScaling) {
  GrayImage img(3, 1);
  img.data = {255, 0, 128};
  const ScoreMap s = decode_scoremap(encode_png(img), false);
  EXPECT_EQ(s.at(0), 1.0f);
  EXPECT_EQ(s.at(1), 0.0f);
  EXPECT_FLOAT_EQ(s.at(2), 128.0f / 255.0f);
  EXPECT_NEAR(s.at(2), 0.50196, 1e-5);
}

TEST(DecodeScoremap, SixteenBitScaling) {
  DecodedImage img;
  img.width = 2;
  img.height = 1;
  img.channels = 1;
  img.bit_depth = 16;
  img.samples = {65535, 32768};
  const ScoreMap s = decode_scoremap(encode_png(img), false);
  EXPECT_EQ(s.at(0), 1.0f);
  EXPECT_FLOAT_EQ(s.at(1), 32768.0f / 65535.0f);
}

TEST(DecodeScoremap, RawFloatFile) {
  const ScoreMap original(3, 2, std::vector<float>{0.0f, 0.25f, 0.5f, 0.75f, 1.0f, 0.125f});
  const auto bytes = encode_raw_scores(original);
  ASSERT_EQ(bytes.size(), 8u + 6u * 4u);
  EXPECT_EQ(bytes[0], 3);
  EXPECT_EQ(bytes[4], 2);
  EXPECT_EQ(decode_raw_scores(bytes), original);
}

TEST(DecodeScoremap, RawOutOfRangeRejected) {
  auto bytes = encode_raw_scores(ScoreMap(1, 1, 0.5f));
  const float bad = 1.5f;
  std::memcpy(bytes.data() + 8, &bad, 4);
  EXPECT_THROW(decode_raw_scores(bytes), DecodeError);
  bytes.pop_back();
  EXPECT_THROW(decode_raw_scores(bytes), DecodeError);
}

TEST(ShapeTransform, PadPlacesSourceTopLeft) {
  BinaryMask m(2, 2, true);
  const auto shaped = apply_shape_transform(m, ShapePolicy::pad_to(4, 4));
  EXPECT_EQ(shaped.plane.width(), 4);
  EXPECT_EQ(shaped.plane.height(), 4);
  EXPECT_EQ(shaped.shape.popcount(), 4u);
  EXPECT_EQ(shaped.plane.popcount(), 4u);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      EXPECT_EQ(shaped.plane.test(x, y), x < 2 && y < 2);
      EXPECT_EQ(shaped.shape.test(x, y), x < 2 && y < 2);
    }
  }
}

TEST(ShapeTransform, PadToSameSizeIsIdentity) {
  std::mt19937_64 rng(5);
  const BinaryMask m = testing::random_mask(rng, 5, 3);
  const auto shaped = apply_shape_transform(m, ShapePolicy::pad_to(5, 3));
  EXPECT_EQ(shaped.plane, m);
  EXPECT_EQ(shaped.shape, ShapeMask::all_valid(5, 3));
}

TEST(ShapeTransform, NearestResizeMatchesIndexArithmetic) {
  BinaryMask board(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) board.set(x, y, (x + y) % 2 == 1);
  }
  const auto shaped = apply_shape_transform(board, ShapePolicy::resize(2, 2));
  EXPECT_EQ(shaped.shape.popcount(), 4u);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) EXPECT_EQ(shaped.plane.test(x, y), board.test(x * 2, y * 2));
  }
}

TEST(ShapeTransform, CenterCrop) {
  ScoreMap s(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) s.set(x, y, static_cast<float>(y * 4 + x) / 16.0f);
  }
  const auto shaped = apply_shape_transform(s, ShapePolicy::center_crop(2, 2));
  EXPECT_EQ(shaped.plane.at(0, 0), s.at(1, 1));
  EXPECT_EQ(shaped.plane.at(1, 1), s.at(2, 2));
  EXPECT_EQ(shaped.shape.popcount(), 4u);
}

TEST(ShapeTransform, Errors) {
  BinaryMask m(4, 4);
  EXPECT_THROW(apply_shape_transform(m, ShapePolicy::center_crop(5, 4)), DimensionError);
  EXPECT_THROW(apply_shape_transform(m, ShapePolicy::pad_to(3, 4)), DimensionError);
  EXPECT_THROW(apply_shape_transform(m, ShapePolicy::resize(0, 4)), DimensionError);
}

TEST(ShapeTransform, BilinearKeepsConstantsAndRange) {
  const ScoreMap s(5, 7, 0.75f);
  const auto shaped = apply_shape_transform(s, ShapePolicy::resize(11, 3));
  for (const float v : shaped.plane.values()) EXPECT_FLOAT_EQ(v, 0.75f);
}

TEST(BinaryMask, DoubleComplementIsIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 70);
    const int h = 1 + static_cast<int>(rng() % 5);
    const BinaryMask m = testing::random_mask(rng, w, h);
    EXPECT_EQ(m.complement().complement(), m);
    EXPECT_EQ(m.complement().popcount(), m.size() - m.popcount());
  }
}

TEST(ScoreMap, RejectsNanAndOutOfRange) {
  EXPECT_THROW(ScoreMap(1, 1, std::vector<float>{std::nanf("")}), Error);
  EXPECT_THROW(ScoreMap(1, 1, std::vector<float>{-0.1f}), Error);
  EXPECT_THROW(ScoreMap(1, 1, std::vector<float>{1.01f}), Error);
  EXPECT_THROW(ScoreMap(2, 1, std::vector<float>{0.5f}), DimensionError);
}

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex(std::string_view("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace fe
