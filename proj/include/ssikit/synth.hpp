#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ssikit/ingest.hpp"
#include "ssikit/rng.hpp"
#include "ssikit/ssi.hpp"
#include "ssikit/texture.hpp"

namespace ssikit {

// Knobs for the census generator. The latent score is drawn from a two-mode
// Gaussian mixture clipped to [0, 1]; attributes are loading * score plus
// Gaussian noise, converted back to integer household counts.
struct SynthOptions {
    double mix_weight1 = 0.7;
    double mix_mean1 = 0.15, mix_sd1 = 0.05;
    double mix_mean2 = 0.60, mix_sd2 = 0.08;
    double noise_scale = 0.05;
    long houses_min = 50, houses_max = 500;
    long rooms_min = 30, rooms_max = 90;
    double density_min = 0.5, density_max = 8.0;  // persons per room at score 0 / 1
    int blocks_per_locality = 10;
    int year = 2010;
};

struct CensusBundle {
    std::vector<BlockRecord> records;
    std::vector<double> scores;  // planted latent score per record
};

double sample_mixture(SplitMix64& rng, const SynthOptions& opt = {});

// Plants a one-factor structure: attribute j = clip(l_j f + sqrt(1-l_j^2) e).
// Loadings must lie in [0, 1); zero loadings yield pure-noise attributes.
CensusBundle generate_census(std::size_t n, const std::array<double, 4>& loadings,
                             uint64_t seed, const SynthOptions& opt = {});

struct RasterLayout {
    int grid_rows = 10;
    int grid_cols = 10;
    int width = 512;
    int height = 512;
};

struct RasterOptions {
    int base = 128;           // mid intensity
    int max_amplitude = 90;   // checker amplitude at SSI 0
    int checker_cell = 3;     // pattern cell size in pixels
    int noise_amplitude = 2;  // uniform jitter; 0 gives the exact pattern
};

struct RasterBundle {
    Raster raster;        // 8-bit intensities
    BlockMask mask;       // tile index + 1, row-major
    std::vector<int> amplitudes;  // planted per-block checker amplitude
};

// One tile per block, row-major over the grid. Intensity spread decreases
// with the block's SSI, so texture variance anti-correlates with it.
RasterBundle generate_raster(const SsiVector& ssi, const RasterLayout& layout,
                             uint64_t seed, const RasterOptions& opt = {});

}  // namespace ssikit
