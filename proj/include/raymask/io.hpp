#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "raymask/mask.hpp"

namespace raymask {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-pixel instance ids: palette index for indexed PNGs, gray value
// otherwise. 0 is background.
struct IndexedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> ids;
};

// 8-bit grayscale or palette PNG; palette images keep their raw indices.
IndexedImage load_mask_png(const std::filesystem::path& path);

// Plain-text PBM (P1), 1 = foreground.
IndexedImage load_mask_pbm(const std::filesystem::path& path);

// Dispatch on extension (.png / .pbm).
IndexedImage load_mask_image(const std::filesystem::path& path);

void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);
void save_indexed_png(const IndexedImage& image,
                      const std::filesystem::path& path);
void save_mask_pbm(const BinaryMask& mask, const std::filesystem::path& path);

// Sorted distinct nonzero ids.
std::vector<int> instance_ids(const IndexedImage& image);

// Pixels equal to `id`.
BinaryMask binary_from_id(const IndexedImage& image, int id);

// Pixels > 0.
BinaryMask binary_any_foreground(const IndexedImage& image);

}  // namespace raymask
