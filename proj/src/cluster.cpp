#include "ssikit/cluster.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ssikit/error.hpp"
#include "ssikit/rng.hpp"

namespace ssikit {

namespace {

double sq_dist(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double d = 0;
    for (int j = 0; j < 4; ++j) {
        double t = a[j] - b[j];
        d += t * t;
    }
    return d;
}

// k-means++: first centroid uniform, then proportional to squared distance
// from the nearest chosen centroid.
std::vector<std::array<double, 4>> seed_centroids(
    const std::vector<std::array<double, 4>>& points, int k, SplitMix64& rng) {
    const std::size_t n = points.size();
    std::vector<std::array<double, 4>> centroids;
    centroids.push_back(points[rng.next_in(0, n - 1)]);

    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total > 0) {
            double target = rng.next_double() * total;
            double acc = 0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.next_in(0, n - 1);  // all remaining points coincide
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

}  // namespace

ClusterResult kmeans(const AttributeMatrix& X, int k, uint64_t seed, int max_iter) {
    const std::size_t n = X.rows();
    if (k < 1) throw ValidationError("k must be at least 1");
    if (static_cast<std::size_t>(k) > n)
        throw ValidationError("k = " + std::to_string(k) + " exceeds the number of blocks (" +
                              std::to_string(n) + ")");
    if (max_iter < 1) throw ValidationError("max_iter must be at least 1");

    SplitMix64 rng(seed);
    auto centroids = seed_centroids(X.values, k, rng);

    ClusterResult result;
    result.labels.assign(n, 0);

    auto assign = [&]() {
        bool changed = false;
        double inertia = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(X.values[i], centroids[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(X.values[i], centroids[c]);
                if (d < best_d) {  // ties keep the lowest index
                    best_d = d;
                    best = c;
                }
            }
            if (result.labels[i] != best) changed = true;
            result.labels[i] = best;
            inertia += best_d;
        }
        result.inertia = inertia;
        return changed;
    };

    bool first = true;
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = assign();
        result.inertia_trace.push_back(result.inertia);
        result.iterations = iter + 1;
        if (!changed && !first) break;
        first = false;

        std::vector<std::array<double, 4>> sums(k, std::array<double, 4>{});
        std::vector<long> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < 4; ++j) sums[result.labels[i]][j] += X.values[i][j];
            ++counts[result.labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (int j = 0; j < 4; ++j) centroids[c][j] = sums[c][j] / counts[c];
            } else {
                // Re-seed the emptied cluster to the point farthest from its
                // assigned centroid; lowest index wins ties.
                std::size_t far = 0;
                double far_d = -1;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = sq_dist(X.values[i], centroids[result.labels[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids[c] = X.values[far];
            }
        }
    }

    assign();  // final labels against the final centroids
    result.centroids = std::move(centroids);
    return result;
}

}  // namespace ssikit
