#include "raymask/io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

namespace raymask {

namespace {

struct PngReadCtx {
  FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;

  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteCtx {
  FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_bytep> rows;

  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

}  // namespace

IndexedImage load_mask_png(const std::filesystem::path& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw io_error("cannot open " + path.string());
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw io_error("libpng read init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw io_error("libpng info init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw io_error("failed to read PNG: " + path.string());

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(ctx.png, ctx.info, &w, &h, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_packing(ctx.png);  // keep indices, one byte per pixel
  } else if (color_type == PNG_COLOR_TYPE_GRAY) {
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
  } else {
    throw io_error("unsupported PNG color type (need grayscale or palette): " +
                   path.string());
  }
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  if (png_get_rowbytes(ctx.png, ctx.info) != w)
    throw io_error("unexpected PNG row layout: " + path.string());

  ctx.pixels.resize(static_cast<std::size_t>(w) * h);
  ctx.rows.resize(h);
  for (png_uint_32 r = 0; r < h; ++r)
    ctx.rows[r] = ctx.pixels.data() + static_cast<std::size_t>(r) * w;
  png_read_image(ctx.png, ctx.rows.data());
  png_read_end(ctx.png, nullptr);

  return {static_cast<int>(w), static_cast<int>(h), std::move(ctx.pixels)};
}

namespace {

void write_png(const std::filesystem::path& path, int width, int height,
               const std::uint8_t* data, bool indexed) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw io_error("cannot write " + path.string());
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw io_error("libpng write init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw io_error("libpng info init failed");
  ctx.rows.resize(height);
  for (int r = 0; r < height; ++r)
    ctx.rows[r] = const_cast<png_bytep>(data + static_cast<std::size_t>(r) * width);

  if (setjmp(png_jmpbuf(ctx.png)))
    throw io_error("failed to write PNG: " + path.string());

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, width, height, 8,
               indexed ? PNG_COLOR_TYPE_PALETTE : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_color palette[256];
  if (indexed) {
    // Ids are what matters; the colors only aid eyeballing.
    for (int i = 0; i < 256; ++i) {
      palette[i].red = static_cast<png_byte>(i == 0 ? 0 : (i * 97) % 224 + 32);
      palette[i].green = static_cast<png_byte>(i == 0 ? 0 : (i * 151) % 224 + 32);
      palette[i].blue = static_cast<png_byte>(i == 0 ? 0 : (i * 53) % 224 + 32);
    }
    png_set_PLTE(ctx.png, ctx.info, palette, 256);
  }
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, ctx.rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> gray(mask.bits().size());
  std::transform(mask.bits().begin(), mask.bits().end(), gray.begin(),
                 [](std::uint8_t b) { return b ? 255 : 0; });
  write_png(path, mask.width(), mask.height(), gray.data(), false);
}

void save_indexed_png(const IndexedImage& image,
                      const std::filesystem::path& path) {
  if (image.ids.size() !=
      static_cast<std::size_t>(image.width) * image.height)
    throw io_error("indexed image size mismatch");
  write_png(path, image.width, image.height, image.ids.data(), true);
}

IndexedImage load_mask_pbm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());

  auto next_token = [&in]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(c);
    }
    return tok;
  };

  if (next_token() != "P1") throw io_error("not a P1 PBM file: " + path.string());
  int w = 0, h = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
  } catch (const std::exception&) {
    throw io_error("malformed PBM header: " + path.string());
  }
  if (w <= 0 || h <= 0) throw io_error("bad PBM dimensions: " + path.string());

  IndexedImage img{w, h, std::vector<std::uint8_t>(
                             static_cast<std::size_t>(w) * h, 0)};
  std::size_t filled = 0;
  char c;
  while (filled < img.ids.size() && in.get(c)) {
    if (c == '#') {
      while (in.get(c) && c != '\n') {
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c != '0' && c != '1')
      throw io_error("bad PBM pixel value: " + path.string());
    img.ids[filled++] = (c == '1') ? 1 : 0;
  }
  if (filled != img.ids.size())
    throw io_error("truncated PBM data: " + path.string());
  return img;
}

void save_mask_pbm(const BinaryMask& mask, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << "P1\n" << mask.width() << ' ' << mask.height() << '\n';
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) out << (mask.at(x, y) ? '1' : '0');
    out << '\n';
  }
  if (!out) throw io_error("failed writing " + path.string());
}

IndexedImage load_mask_image(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png" || ext == ".PNG") return load_mask_png(path);
  if (ext == ".pbm" || ext == ".PBM") return load_mask_pbm(path);
  throw io_error("unsupported mask format: " + path.string());
}

std::vector<int> instance_ids(const IndexedImage& image) {
  std::set<int> ids;
  for (auto v : image.ids)
    if (v != 0) ids.insert(v);
  return {ids.begin(), ids.end()};
}

BinaryMask binary_from_id(const IndexedImage& image, int id) {
  std::vector<std::uint8_t> bits(image.ids.size());
  std::transform(image.ids.begin(), image.ids.end(), bits.begin(),
                 [id](std::uint8_t v) { return v == id ? 1 : 0; });
  return BinaryMask(image.width, image.height, std::move(bits));
}

BinaryMask binary_any_foreground(const IndexedImage& image) {
  std::vector<std::uint8_t> bits(image.ids.size());
  std::transform(image.ids.begin(), image.ids.end(), bits.begin(),
                 [](std::uint8_t v) { return v > 0 ? 1 : 0; });
  return BinaryMask(image.width, image.height, std::move(bits));
}

}  // namespace raymask
