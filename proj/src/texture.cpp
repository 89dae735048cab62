#include "ssikit/texture.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <string>
#include <thread>

#include "ssikit/error.hpp"

namespace ssikit {

namespace {

constexpr std::array<Offset, 4> kFourOrientations{{{0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};
constexpr std::array<Offset, 1> kShift11{{{1, 1}}};

// One formula path for every GLCM feature computation; the sliding engine and
// the public features() both funnel through here so the recount oracle in the
// tests compares like against like.
template <typename PAt, typename PLogPAt>
GlcmFeatures compute_features(int levels, std::vector<double>& px, PAt p_at,
                              PLogPAt plogp_at) {
    std::fill(px.begin(), px.end(), 0.0);
    double uniformity = 0, entropy = 0, contrast = 0, idm = 0, eij = 0;
    for (int i = 0; i < levels; ++i) {
        for (int j = 0; j < levels; ++j) {
            double p = p_at(i, j);
            if (p <= 0.0) continue;
            uniformity += p * p;
            entropy -= plogp_at(i, j, p);
            double d = static_cast<double>(i - j);
            contrast += d * d * p;
            idm += p / (1.0 + d * d);
            px[i] += p;
            eij += static_cast<double>(i) * static_cast<double>(j) * p;
        }
    }
    double mu = 0;
    for (int i = 0; i < levels; ++i) mu += static_cast<double>(i) * px[i];
    double var = 0;
    for (int i = 0; i < levels; ++i) {
        double d = static_cast<double>(i) - mu;
        var += d * d * px[i];
    }
    double cov = eij - mu * mu;

    GlcmFeatures f;
    f.uniformity = uniformity;
    f.entropy = entropy;
    f.contrast = contrast;
    f.inverse_difference_moment = idm;
    f.variance = var;
    f.covariance = cov;
    f.correlation = var < 1e-12 ? 0.0 : cov / var;
    return f;
}

struct OffsetState {
    Offset off;
    int row_lo = 0, row_hi = 0;  // valid left-endpoint rows, relative to window top
    int col_lo = 0, col_hi = 0;  // valid left-endpoint cols, relative to window left
    long total = 0;              // symmetrized pair count, constant per window size
    double inv_total = 0;
    std::vector<uint32_t> counts;  // levels x levels
    std::vector<double> plogp;     // plogp[c] = (c/total) ln(c/total)
};

// Incremental GLCM over a sliding window: moving one column right removes the
// departing strip of pixel pairs and adds the arriving one, per orientation.
class SlidingWindow {
public:
    SlidingWindow(const Raster& quantized, int window, int levels,
                  std::span<const Offset> offsets)
        : q_(quantized), window_(window), levels_(levels) {
        for (const Offset& o : offsets) {
            OffsetState s;
            s.off = o;
            s.row_lo = std::max(0, -o.drow);
            s.row_hi = window_ - std::max(0, o.drow);
            s.col_lo = std::max(0, -o.dcol);
            s.col_hi = window_ - std::max(0, o.dcol);
            s.total = 2L * (s.row_hi - s.row_lo) * (s.col_hi - s.col_lo);
            s.inv_total = 1.0 / static_cast<double>(s.total);
            s.counts.assign(static_cast<std::size_t>(levels_) * levels_, 0);
            s.plogp.resize(static_cast<std::size_t>(s.total) + 1);
            s.plogp[0] = 0.0;
            for (long c = 1; c <= s.total; ++c) {
                double p = static_cast<double>(c) * s.inv_total;
                s.plogp[c] = p * std::log(p);
            }
            states_.push_back(std::move(s));
        }
        px_.resize(levels_);
    }

    void start_row(int top) {
        top_ = top;
        left_ = 0;
        for (auto& s : states_) {
            std::fill(s.counts.begin(), s.counts.end(), 0);
            for (int c = s.col_lo; c < s.col_hi; ++c) add_strip(s, c, +1);
        }
    }

    void advance() {
        for (auto& s : states_) {
            add_strip(s, left_ + s.col_lo, -1);
            add_strip(s, left_ + 1 + s.col_hi - 1, +1);
        }
        ++left_;
    }

    // Feature vectors per orientation, averaged.
    GlcmFeatures averaged() {
        GlcmFeatures acc;
        for (auto& s : states_) {
            const uint32_t* counts = s.counts.data();
            const double* table = s.plogp.data();
            double inv_total = s.inv_total;
            GlcmFeatures f = compute_features(
                levels_, px_,
                [&](int i, int j) {
                    return static_cast<double>(counts[static_cast<std::size_t>(i) * levels_ + j]) *
                           inv_total;
                },
                [&](int i, int j, double) {
                    return table[counts[static_cast<std::size_t>(i) * levels_ + j]];
                });
            acc.uniformity += f.uniformity;
            acc.entropy += f.entropy;
            acc.contrast += f.contrast;
            acc.inverse_difference_moment += f.inverse_difference_moment;
            acc.variance += f.variance;
            acc.covariance += f.covariance;
            acc.correlation += f.correlation;
        }
        double inv_n = 1.0 / static_cast<double>(states_.size());
        acc.uniformity *= inv_n;
        acc.entropy *= inv_n;
        acc.contrast *= inv_n;
        acc.inverse_difference_moment *= inv_n;
        acc.variance *= inv_n;
        acc.covariance *= inv_n;
        acc.correlation *= inv_n;
        return acc;
    }

private:
    void add_strip(OffsetState& s, int col, int sign) {
        for (int r = top_ + s.row_lo; r < top_ + s.row_hi; ++r) {
            std::size_t a = q_.at(r, col);
            std::size_t b = q_.at(r + s.off.drow, col + s.off.dcol);
            if (sign > 0) {
                ++s.counts[a * levels_ + b];
                ++s.counts[b * levels_ + a];
            } else {
                --s.counts[a * levels_ + b];
                --s.counts[b * levels_ + a];
            }
        }
    }

    const Raster& q_;
    int window_;
    int levels_;
    int top_ = 0;
    int left_ = 0;
    std::vector<OffsetState> states_;
    std::vector<double> px_;
};

void validate_window(const Raster& raster, const TextureOptions& opt) {
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.pixels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        throw ValidationError("raster dimensions are inconsistent");
    if (opt.window < 3 || opt.window % 2 == 0)
        throw ValidationError("window size must be odd and at least 3");
    if (opt.window > raster.width || opt.window > raster.height)
        throw ValidationError("raster is smaller than the window (" +
                              std::to_string(opt.window) + ")");
}

// Contiguous bands of center rows; exceptions from workers are rethrown.
template <typename Fn>
void run_banded(int rows, int threads, Fn&& body) {
    int t = std::clamp(threads, 1, rows);
    if (t <= 1) {
        body(0, rows);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(t);
    for (int b = 0; b < t; ++b) {
        int lo = static_cast<int>(static_cast<long>(rows) * b / t);
        int hi = static_cast<int>(static_cast<long>(rows) * (b + 1) / t);
        workers.emplace_back([&, b, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::array<double, 7> feature_values(const GlcmFeatures& f) {
    return {f.uniformity, f.entropy,  f.contrast,   f.inverse_difference_moment,
            f.variance,   f.covariance, f.correlation};
}

GlcmFeatures features_from_values(const std::array<double, 7>& v) {
    GlcmFeatures f;
    f.uniformity = v[0];
    f.entropy = v[1];
    f.contrast = v[2];
    f.inverse_difference_moment = v[3];
    f.variance = v[4];
    f.covariance = v[5];
    f.correlation = v[6];
    return f;
}

double feature_by_name(const GlcmFeatures& f, std::string_view name) {
    auto vals = feature_values(f);
    for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
        if (name == kFeatureNames[i]) return vals[i];
    throw ValidationError("unknown texture feature '" + std::string(name) + "'");
}

std::span<const Offset> offsets_for(OffsetMode mode) {
    if (mode == OffsetMode::kShift11) return kShift11;
    return kFourOrientations;
}

Raster quantize(const Raster& raster, int levels) {
    if (levels < 2 || levels > 1024)
        throw ValidationError("quantization levels must be in [2, 1024]");
    if (raster.pixels.empty() ||
        raster.pixels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        throw ValidationError("raster is empty or dimensions are inconsistent");

    auto [mn_it, mx_it] = std::minmax_element(raster.pixels.begin(), raster.pixels.end());
    uint32_t mn = *mn_it;
    uint32_t range = static_cast<uint32_t>(*mx_it) - mn + 1;

    Raster out;
    out.width = raster.width;
    out.height = raster.height;
    out.pixels.resize(raster.pixels.size());
    for (std::size_t i = 0; i < raster.pixels.size(); ++i)
        out.pixels[i] = static_cast<uint16_t>(
            static_cast<uint64_t>(raster.pixels[i] - mn) * levels / range);
    return out;
}

Glcm glcm_for_patch(const Raster& patch, Offset offset, int levels) {
    if (levels < 1 || levels > 1024)
        throw ValidationError("GLCM levels must be in [1, 1024]");
    if (patch.pixels.empty() ||
        patch.pixels.size() != static_cast<std::size_t>(patch.width) * patch.height)
        throw ValidationError("patch is empty or dimensions are inconsistent");

    std::vector<long> counts(static_cast<std::size_t>(levels) * levels, 0);
    long total = 0;
    for (int r = 0; r < patch.height; ++r) {
        int r2 = r + offset.drow;
        if (r2 < 0 || r2 >= patch.height) continue;
        for (int c = 0; c < patch.width; ++c) {
            int c2 = c + offset.dcol;
            if (c2 < 0 || c2 >= patch.width) continue;
            int a = patch.at(r, c);
            int b = patch.at(r2, c2);
            if (a >= levels || b >= levels)
                throw ValidationError("patch value exceeds quantization levels");
            ++counts[static_cast<std::size_t>(a) * levels + b];
            ++counts[static_cast<std::size_t>(b) * levels + a];
            total += 2;
        }
    }
    if (total == 0)
        throw ValidationError("no valid pixel pair for offset (" +
                              std::to_string(offset.drow) + "," +
                              std::to_string(offset.dcol) + ")");

    Glcm g;
    g.levels = levels;
    g.p.resize(counts.size());
    double inv_total = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i)
        g.p[i] = static_cast<double>(counts[i]) * inv_total;
    return g;
}

GlcmFeatures features(const Glcm& glcm) {
    if (glcm.levels < 1 ||
        glcm.p.size() != static_cast<std::size_t>(glcm.levels) * glcm.levels)
        throw ValidationError("GLCM dimensions are inconsistent");
    double sum = 0;
    for (double p : glcm.p) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("GLCM is not normalized (sum = " + std::to_string(sum) + ")");

    std::vector<double> px(glcm.levels);
    return compute_features(
        glcm.levels, px,
        [&](int i, int j) { return glcm.at(i, j); },
        [](int, int, double p) { return p * std::log(p); });
}

FeatureGrid window_features(const Raster& raster, const TextureOptions& opt) {
    validate_window(raster, opt);
    Raster q = quantize(raster, opt.levels);
    auto offs = offsets_for(opt.mode);

    FeatureGrid grid;
    grid.rows = raster.height - opt.window + 1;
    grid.cols = raster.width - opt.window + 1;
    grid.margin = opt.window / 2;
    grid.cells.resize(static_cast<std::size_t>(grid.rows) * grid.cols);

    run_banded(grid.rows, opt.threads, [&](int lo, int hi) {
        SlidingWindow sw(q, opt.window, opt.levels, offs);
        for (int r = lo; r < hi; ++r) {
            sw.start_row(r);
            for (int c = 0; c < grid.cols; ++c) {
                grid.cells[static_cast<std::size_t>(r) * grid.cols + c] = sw.averaged();
                if (c + 1 < grid.cols) sw.advance();
            }
        }
    });
    return grid;
}

BlockTextureResult block_texture(const Raster& raster, const BlockMask& mask,
                                 const TextureOptions& opt) {
    if (mask.width != raster.width || mask.height != raster.height)
        throw ValidationError("mask dimensions do not match the raster");
    validate_window(raster, opt);
    Raster q = quantize(raster, opt.levels);
    auto offs = offsets_for(opt.mode);

    const int rows = raster.height - opt.window + 1;
    const int cols = raster.width - opt.window + 1;
    const int margin = opt.window / 2;

    struct Accum {
        std::array<double, 7> sum{};
        long n = 0;
    };
    using RowAccum = std::map<uint16_t, Accum>;
    std::vector<RowAccum> row_acc(rows);

    auto window_is_pure = [&](int top, int left, uint16_t label) {
        for (int r = top; r < top + opt.window; ++r)
            for (int c = left; c < left + opt.window; ++c)
                if (mask.at(r, c) != label) return false;
        return true;
    };

    run_banded(rows, opt.threads, [&](int lo, int hi) {
        SlidingWindow sw(q, opt.window, opt.levels, offs);
        for (int r = lo; r < hi; ++r) {
            sw.start_row(r);
            RowAccum& acc = row_acc[r];
            for (int c = 0; c < cols; ++c) {
                uint16_t label = mask.at(r + margin, c + margin);
                if (label != 0 && (!opt.exclude_straddling || window_is_pure(r, c, label))) {
                    auto vals = feature_values(sw.averaged());
                    Accum& slot = acc[label];
                    for (int i = 0; i < 7; ++i) slot.sum[i] += vals[i];
                    ++slot.n;
                }
                if (c + 1 < cols) sw.advance();
            }
        }
    });

    // Rows merge in a fixed order so the result is byte-identical for any
    // thread count.
    std::map<uint16_t, Accum> totals;
    for (const RowAccum& acc : row_acc) {
        for (const auto& [label, a] : acc) {
            Accum& slot = totals[label];
            for (int i = 0; i < 7; ++i) slot.sum[i] += a.sum[i];
            slot.n += a.n;
        }
    }
    if (totals.empty())
        throw ValidationError("no block has a valid window center (raster margin too wide)");

    std::set<uint16_t> seen_labels;
    for (uint16_t label : mask.labels)
        if (label != 0) seen_labels.insert(label);

    BlockTextureResult result;
    for (const auto& [label, a] : totals) {
        std::array<double, 7> mean{};
        for (int i = 0; i < 7; ++i) mean[i] = a.sum[i] / static_cast<double>(a.n);
        result.blocks.emplace(label, BlockFeatures{features_from_values(mean), a.n});
    }
    for (uint16_t label : seen_labels)
        if (!result.blocks.count(label)) result.missing.push_back(label);
    return result;
}

}  // namespace ssikit
