#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssikit {

// Row-major grayscale raster, bit depth <= 16.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<uint16_t> pixels;

    uint16_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
    uint16_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

// Per-pixel block labels, 0 = unassigned. Dimensions must match the
// companion intensity raster.
struct BlockMask {
    int width = 0;
    int height = 0;
    std::vector<uint16_t> labels;

    uint16_t at(int row, int col) const { return labels[static_cast<std::size_t>(row) * width + col]; }
};

// Symmetric normalized co-occurrence matrix.
struct Glcm {
    int levels = 0;
    std::vector<double> p;  // levels x levels, row-major

    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * levels + j]; }
};

struct GlcmFeatures {
    double uniformity = 0;
    double entropy = 0;
    double contrast = 0;
    double inverse_difference_moment = 0;
    double variance = 0;
    double covariance = 0;
    double correlation = 0;
};

// Column order of the feature file and of feature_values().
inline constexpr std::array<const char*, 7> kFeatureNames = {
    "uniformity", "entropy", "contrast", "idm", "variance", "covariance", "correlation"};

std::array<double, 7> feature_values(const GlcmFeatures& f);
GlcmFeatures features_from_values(const std::array<double, 7>& v);
double feature_by_name(const GlcmFeatures& f, std::string_view name);

struct Offset {
    int drow = 0;
    int dcol = 0;
};

enum class OffsetMode {
    kFourOrientations,  // distance-1 offsets at 0, 45, 90, 135 degrees, averaged
    kShift11,           // single (1,1) offset
};

std::span<const Offset> offsets_for(OffsetMode mode);

// Linear quantization of [min_pixel, max_pixel] to {0..levels-1}; a constant
// raster maps to level 0.
Raster quantize(const Raster& raster, int levels);

// Counts ordered pixel pairs at the offset, adds the transposed counts and
// normalizes. The patch must already be quantized to [0, levels).
Glcm glcm_for_patch(const Raster& patch, Offset offset, int levels);

// Haralick statistics of one GLCM. Correlation is 0 by convention when the
// marginal variance is below 1e-12.
GlcmFeatures features(const Glcm& glcm);

struct TextureOptions {
    int window = 21;
    int levels = 32;
    OffsetMode mode = OffsetMode::kFourOrientations;
    int threads = 1;
    // When set, block_texture drops windows that straddle a block boundary
    // instead of assigning them by center label.
    bool exclude_straddling = false;
};

// Features for every pixel whose window fits in bounds; cell (r, c) holds the
// center at raster position (r + margin, c + margin).
struct FeatureGrid {
    int rows = 0;
    int cols = 0;
    int margin = 0;
    std::vector<GlcmFeatures> cells;

    const GlcmFeatures& at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
};

// Quantizes internally, slides a window over the raster and averages the
// per-orientation feature vectors. Uses an incremental pair-count update as
// the window moves; tests pin equality with a recount-from-scratch oracle.
FeatureGrid window_features(const Raster& raster, const TextureOptions& opt);

struct BlockFeatures {
    GlcmFeatures mean;
    long n_windows = 0;
};

struct BlockTextureResult {
    std::map<uint16_t, BlockFeatures> blocks;  // keyed by mask label
    std::vector<uint16_t> missing;             // labels with no valid center
};

// Mean window features per block, windows assigned by center label. Blocks
// whose pixels all fall inside the window margin come back as missing.
BlockTextureResult block_texture(const Raster& raster, const BlockMask& mask,
                                 const TextureOptions& opt);

}  // namespace ssikit
