#pragma once

#include <unistd.h>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "ssikit/ingest.hpp"
#include "ssikit/rng.hpp"
#include "ssikit/stats.hpp"
#include "ssikit/texture.hpp"

namespace ssikit::testing {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ssikit_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(static_cast<long>(::getpid())));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline AttributeMatrix make_matrix(std::vector<std::array<double, 4>> rows) {
    AttributeMatrix X;
    for (std::size_t i = 0; i < rows.size(); ++i)
        X.block_ids.push_back("B" + std::to_string(i + 1));
    X.values = std::move(rows);
    return X;
}

inline AttributeMatrix random_matrix(std::size_t n, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::array<double, 4>> rows(n);
    for (auto& r : rows)
        for (int j = 0; j < 4; ++j) r[j] = rng.next_double();
    return make_matrix(std::move(rows));
}

inline Mat4 one_factor_model(const std::array<double, 4>& l) {
    Mat4 R;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) R(j, k) = j == k ? 1.0 : l[j] * l[k];
    return R;
}

inline Mat4 equicorrelation(double r) {
    Mat4 R = Mat4::Constant(r);
    R.diagonal().setOnes();
    return R;
}

inline Raster make_raster(int width, int height, std::vector<uint16_t> pixels) {
    return Raster{width, height, std::move(pixels)};
}

inline Raster random_raster(int width, int height, uint16_t maxval, SplitMix64& rng) {
    Raster r;
    r.width = width;
    r.height = height;
    r.pixels.resize(static_cast<std::size_t>(width) * height);
    for (auto& p : r.pixels) p = static_cast<uint16_t>(rng.next_in(0, maxval));
    return r;
}

// Recount-from-scratch reference for one window center: extracts the patch,
// builds one GLCM per offset through the public per-patch path and averages
// the feature vectors. Pins the incremental sliding engine.
inline GlcmFeatures naive_center(const Raster& quantized, int top, int left, int window,
                                 int levels, std::span<const Offset> offsets) {
    Raster patch;
    patch.width = window;
    patch.height = window;
    for (int r = top; r < top + window; ++r)
        for (int c = left; c < left + window; ++c) patch.pixels.push_back(quantized.at(r, c));

    std::array<double, 7> acc{};
    for (const Offset& o : offsets) {
        auto vals = feature_values(features(glcm_for_patch(patch, o, levels)));
        for (int i = 0; i < 7; ++i) acc[i] += vals[i];
    }
    for (auto& v : acc) v /= static_cast<double>(offsets.size());
    return features_from_values(acc);
}

// Within-cluster squared distance of an arbitrary labeling, centroids at the
// member means.
inline double partition_inertia(const AttributeMatrix& X, const std::vector<int>& labels,
                                int k) {
    std::vector<std::array<double, 4>> sums(k, std::array<double, 4>{});
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < 4; ++j) sums[labels[i]][j] += X.values[i][j];
        ++counts[labels[i]];
    }
    double inertia = 0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < 4; ++j) {
            double c = sums[labels[i]][j] / counts[labels[i]];
            inertia += (X.values[i][j] - c) * (X.values[i][j] - c);
        }
    }
    return inertia;
}

}  // namespace ssikit::testing
