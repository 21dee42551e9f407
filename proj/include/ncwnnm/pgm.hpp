#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncwnnm/image.hpp"

namespace ncw {

// Binary 8-bit PGM (P5). Reading accepts comments in the header and maxval up
// to 255. Writing quantizes with round-half-up and clamps to [0, 255].

Image read_pgm(const std::filesystem::path& path);
Image decode_pgm(const std::string& bytes);

std::string encode_pgm(const Image& img);
void write_pgm(const std::filesystem::path& path, const Image& img);

std::uint8_t quantize(double value) noexcept;

/// The image as it would be after a write/read cycle.
Image quantized(const Image& img);

}  // namespace ncw
