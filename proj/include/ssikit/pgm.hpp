#pragma once

#include <filesystem>

#include "ssikit/texture.hpp"

namespace ssikit {

// Reads P2 (ASCII) or P5 (binary) PGM, 8- or 16-bit. 16-bit P5 samples are
// big-endian per the netpbm format.
Raster read_pgm(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Raster& raster, int maxval,
               bool binary = true);

}  // namespace ssikit
