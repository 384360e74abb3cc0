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

#include "forensic_eval/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>  // required by jpeglib.h
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <jpeglib.h>

#include "forensic_eval/error.hpp"

namespace fe {

namespace fs = std::filesystem;

std::uint32_t DecodedImage::intensity(std::size_t pixel) const noexcept {
  if (channels == 1) return samples[pixel];
  const std::uint16_t* p = samples.data() + 3 * pixel;
  return luma(p[0], p[1], p[2]);
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    throw DecodeError("cannot read " + path.string());
  }
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

// ---------------------------------------------------------------------------
// PNG

namespace {

struct PngSource {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

struct PngContext {
  char message[256] = {};
};

void png_on_error(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<PngContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message, sizeof(ctx->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

void png_read_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->offset + length > src->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(out, src->bytes.data() + src->offset, length);
  src->offset += length;
}

void png_write_memory(png_structp png, png_bytep data, png_size_t length) {
  auto* sink = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  sink->insert(sink->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

DecodedImage decode_png(std::span<const std::uint8_t> bytes) {
  // All C++ objects live before setjmp so a longjmp skips no destructors.
  DecodedImage out;
  std::vector<std::uint8_t> buffer;
  std::vector<png_bytep> rows;
  PngSource source{bytes, 0};
  PngContext ctx;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, png_on_error, png_on_warning);
  if (!png) throw DecodeError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DecodeError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError(std::string("PNG decode failed: ") + ctx.message);
  }

  png_set_read_fn(png, &source, png_read_memory);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);

  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (out.channels != 1 && out.channels != 3) {
    throw DecodeError("unsupported PNG channel count " + std::to_string(out.channels));
  }
  const std::size_t count = static_cast<std::size_t>(width) * height * out.channels;
  out.samples.resize(count);
  if (out.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      out.samples[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) out.samples[i] = buffer[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// JPEG

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_on_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_on_message(j_common_ptr, int) {}

DecodedImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  DecodedImage out;
  std::vector<std::uint8_t> row;
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;

  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_on_error;
  err.base.emit_message = jpeg_on_message;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(std::string("JPEG decode failed: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, const_cast<unsigned char*>(bytes.data()),
               static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError("CMYK JPEG is not supported");
  }
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);

  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.channels = cinfo.output_components;
  out.bit_depth = 8;
  const std::size_t stride = static_cast<std::size_t>(out.width) * out.channels;
  out.samples.resize(stride * out.height);
  row.resize(stride);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW ptr = row.data();
    const std::size_t y = cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &ptr, 1);
    for (std::size_t i = 0; i < stride; ++i) out.samples[y * stride + i] = row[i];
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

bool has_png_magic(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t kMagic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::memcmp(b.data(), kMagic, 8) == 0;
}

bool has_jpeg_magic(std::span<const std::uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  DecodedImage out;
  if (has_png_magic(bytes)) {
    out = decode_png(bytes);
  } else if (has_jpeg_magic(bytes)) {
    out = decode_jpeg(bytes);
  } else {
    throw DecodeError("unrecognized image format (expected PNG or JPEG)");
  }
  if (out.width <= 0 || out.height <= 0) throw DecodeError("image has zero dimension");
  return out;
}

DecodedImage decode_image_file(const fs::path& path) {
  try {
    return decode_image(read_file(path));
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const DecodedImage& image) {
  std::vector<std::uint8_t> sink;
  std::vector<std::uint8_t> row;
  PngContext ctx;

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, png_on_error, png_on_warning);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(std::string("PNG encode failed: ") + ctx.message);
  }

  png_set_write_fn(png, &sink, png_write_memory, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), image.bit_depth,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const std::size_t per_row = static_cast<std::size_t>(image.width) * image.channels;
  const std::size_t bytes_per_sample = image.bit_depth == 16 ? 2 : 1;
  row.resize(per_row * bytes_per_sample);
  for (int y = 0; y < image.height; ++y) {
    const std::uint16_t* src = image.samples.data() + static_cast<std::size_t>(y) * per_row;
    for (std::size_t i = 0; i < per_row; ++i) {
      if (bytes_per_sample == 2) {
        row[2 * i] = static_cast<std::uint8_t>(src[i] >> 8);
        row[2 * i + 1] = static_cast<std::uint8_t>(src[i] & 0xFF);
      } else {
        row[i] = static_cast<std::uint8_t>(src[i]);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return sink;
}

namespace {

template <int C>
DecodedImage from_raster(const Raster<C>& image) {
  DecodedImage out;
  out.width = image.width;
  out.height = image.height;
  out.channels = C;
  out.bit_depth = 8;
  out.samples.assign(image.data.begin(), image.data.end());
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const GrayImage& image) { return encode_png(from_raster(image)); }
std::vector<std::uint8_t> encode_png(const RgbImage& image) { return encode_png(from_raster(image)); }

std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
  GrayImage gray(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) gray.data[i] = mask.test(i) ? 255 : 0;
  return encode_png(gray);
}

std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality) {
  if (quality < 1 || quality > 100) throw Error("JPEG quality must be in [1,100]");
  std::vector<std::uint8_t> result;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_compress_struct cinfo;
  JpegErrorManager err;

  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_on_error;
  err.base.emit_message = jpeg_on_message;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw Error(std::string("JPEG encode failed: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.comp_info[0].h_samp_factor = 2;
  cinfo.comp_info[0].v_samp_factor = 2;
  for (int c = 1; c < 3; ++c) {
    cinfo.comp_info[c].h_samp_factor = 1;
    cinfo.comp_info[c].v_samp_factor = 1;
  }
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(image.width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPLE*>(image.data.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  result.assign(buffer, buffer + size);
  std::free(buffer);
  return result;
}

GrayImage to_gray8(const DecodedImage& image) {
  GrayImage out(image.width, image.height);
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t v = image.intensity(i);
    if (image.bit_depth == 16) v = (v * 255 + 32767) / 65535;
    out.data[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

RgbImage to_rgb8(const DecodedImage& image) {
  RgbImage out(image.width, image.height);
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      std::uint32_t v = image.samples[image.channels == 1 ? i : 3 * i + c];
      if (image.bit_depth == 16) v = (v * 255 + 32767) / 65535;
      out.data[3 * i + c] = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

GrayImage read_gray(const fs::path& path) { return to_gray8(decode_image_file(path)); }
RgbImage read_rgb(const fs::path& path) { return to_rgb8(decode_image_file(path)); }

BinaryMask mask_from_image(const DecodedImage& image, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("mask threshold must lie in (0,1)");
  BinaryMask out(image.width, image.height);
  const double max = image.max_value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.set(i, static_cast<double>(image.intensity(i)) / max >= threshold);
  }
  return out;
}

BinaryMask decode_mask(std::span<const std::uint8_t> bytes, double threshold) {
  return mask_from_image(decode_image(bytes), threshold);
}

BinaryMask decode_mask(const fs::path& path, double threshold) {
  return mask_from_image(decode_image_file(path), threshold);
}

namespace {

std::uint32_t read_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32le(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

ScoreMap decode_raw_scores(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw DecodeError("raw score file shorter than its header");
  const std::uint32_t width = read_u32le(bytes.data());
  const std::uint32_t height = read_u32le(bytes.data() + 4);
  if (width == 0 || height == 0) throw DecodeError("raw score file has zero dimension");
  const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
  if (bytes.size() != 8 + 4 * count) {
    throw DecodeError("raw score file size does not match its " + std::to_string(width) + "x" +
                      std::to_string(height) + " header");
  }
  std::vector<float> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t bits = read_u32le(bytes.data() + 8 + 4 * i);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw DecodeError("raw score " + std::to_string(v) + " at index " + std::to_string(i) +
                        " outside [0,1]");
    }
    values[i] = v;
  }
  return ScoreMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

std::vector<std::uint8_t> encode_raw_scores(const ScoreMap& scores) {
  std::vector<std::uint8_t> out(8 + 4 * scores.size());
  write_u32le(out.data(), static_cast<std::uint32_t>(scores.width()));
  write_u32le(out.data() + 4, static_cast<std::uint32_t>(scores.height()));
  const auto values = scores.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &values[i], sizeof bits);
    write_u32le(out.data() + 8 + 4 * i, bits);
  }
  return out;
}

ScoreMap scoremap_from_image(const DecodedImage& image) {
  std::vector<float> values(static_cast<std::size_t>(image.width) * image.height);
  const double max = image.max_value();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<float>(static_cast<double>(image.intensity(i)) / max);
  }
  return ScoreMap(image.width, image.height, std::move(values));
}

ScoreMap decode_scoremap(std::span<const std::uint8_t> bytes, bool raw) {
  return raw ? decode_raw_scores(bytes) : scoremap_from_image(decode_image(bytes));
}

ScoreMap decode_scoremap(const fs::path& path) {
  try {
    return decode_scoremap(read_file(path), path.extension() == ".f32");
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

}  // namespace fe
