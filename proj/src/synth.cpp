#include "ssikit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ssikit/error.hpp"

namespace ssikit {

namespace {

std::string padded_id(const char* prefix, std::size_t index, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, index);
    return buf;
}

}  // namespace

double sample_mixture(SplitMix64& rng, const SynthOptions& opt) {
    double u = rng.next_double();
    double v = u < opt.mix_weight1 ? opt.mix_mean1 + opt.mix_sd1 * rng.next_normal()
                                   : opt.mix_mean2 + opt.mix_sd2 * rng.next_normal();
    return std::clamp(v, 0.0, 1.0);
}

CensusBundle generate_census(std::size_t n, const std::array<double, 4>& loadings,
                             uint64_t seed, const SynthOptions& opt) {
    if (n < 100) throw ValidationError("synthetic census needs at least 100 blocks");
    for (double l : loadings)
        if (l < 0.0 || l >= 1.0)
            throw ValidationError("loadings must lie in [0, 1)");

    SplitMix64 rng(seed);
    CensusBundle bundle;
    bundle.records.reserve(n);
    bundle.scores.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        double f = sample_mixture(rng, opt);

        // attribute_j = clip(l_j f + sqrt(1 - l_j^2) e_j), e_j ~ N(0, noise^2)
        std::array<double, 4> x{};
        for (int j = 0; j < 4; ++j) {
            double e = opt.noise_scale * rng.next_normal();
            x[j] = std::clamp(loadings[j] * f + std::sqrt(1.0 - loadings[j] * loadings[j]) * e,
                              0.0, 1.0);
        }

        BlockRecord r;
        r.block_id = padded_id("B", i + 1, 6);
        r.locality_id = padded_id("L", i / static_cast<std::size_t>(opt.blocks_per_locality) + 1, 4);
        r.year = opt.year;
        r.houses_total = static_cast<long>(rng.next_in(opt.houses_min, opt.houses_max));
        r.houses_no_sanitation = std::lround(x[0] * static_cast<double>(r.houses_total));
        r.houses_no_water = std::lround(x[1] * static_cast<double>(r.houses_total));
        r.houses_dirt_floor_or_single_room =
            std::lround(x[2] * static_cast<double>(r.houses_total));
        r.rooms_total = static_cast<long>(rng.next_in(opt.rooms_min, opt.rooms_max));
        double density = opt.density_min + x[3] * (opt.density_max - opt.density_min);
        r.occupants_total = std::lround(density * static_cast<double>(r.rooms_total));

        bundle.records.push_back(std::move(r));
        bundle.scores.push_back(f);
    }
    return bundle;
}

RasterBundle generate_raster(const SsiVector& ssi, const RasterLayout& layout,
                             uint64_t seed, const RasterOptions& opt) {
    const int blocks = layout.grid_rows * layout.grid_cols;
    if (layout.grid_rows < 1 || layout.grid_cols < 1)
        throw ValidationError("raster layout grid must be at least 1x1");
    if (static_cast<int>(ssi.size()) != blocks)
        throw ValidationError("SSI vector has " + std::to_string(ssi.size()) +
                              " blocks but the layout holds " + std::to_string(blocks));
    if (layout.width < layout.grid_cols || layout.height < layout.grid_rows)
        throw ValidationError("raster smaller than the block grid");
    if (opt.checker_cell < 1) throw ValidationError("checker cell must be at least 1 pixel");

    // Tile boundaries spread the remainder evenly.
    std::vector<int> xs(layout.grid_cols + 1), ys(layout.grid_rows + 1);
    for (int c = 0; c <= layout.grid_cols; ++c)
        xs[c] = static_cast<int>(static_cast<long>(layout.width) * c / layout.grid_cols);
    for (int r = 0; r <= layout.grid_rows; ++r)
        ys[r] = static_cast<int>(static_cast<long>(layout.height) * r / layout.grid_rows);

    RasterBundle bundle;
    bundle.raster.width = layout.width;
    bundle.raster.height = layout.height;
    bundle.raster.pixels.assign(static_cast<std::size_t>(layout.width) * layout.height, 0);
    bundle.mask.width = layout.width;
    bundle.mask.height = layout.height;
    bundle.mask.labels.assign(bundle.raster.pixels.size(), 0);
    bundle.amplitudes.resize(blocks);

    for (int b = 0; b < blocks; ++b)
        bundle.amplitudes[b] =
            static_cast<int>(std::lround((1.0 - ssi.values[b]) * opt.max_amplitude));

    SplitMix64 rng(seed);
    for (int y = 0; y < layout.height; ++y) {
        int tr = static_cast<int>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin()) - 1;
        for (int x = 0; x < layout.width; ++x) {
            int tc = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
            int block = tr * layout.grid_cols + tc;
            int amp = bundle.amplitudes[block];
            int parity = ((x / opt.checker_cell) + (y / opt.checker_cell)) & 1;
            long v = opt.base + (parity ? amp : -amp);
            if (opt.noise_amplitude > 0)
                v += static_cast<long>(rng.next_in(0, 2 * opt.noise_amplitude)) -
                     opt.noise_amplitude;
            v = std::clamp(v, 0L, 255L);
            std::size_t idx = static_cast<std::size_t>(y) * layout.width + x;
            bundle.raster.pixels[idx] = static_cast<uint16_t>(v);
            bundle.mask.labels[idx] = static_cast<uint16_t>(block + 1);
        }
    }
    return bundle;
}

}  // namespace ssikit
