#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ssikit/ingest.hpp"

namespace ssikit {

struct ClusterResult {
    std::vector<int> labels;                        // one per row, in [0, k)
    std::vector<std::array<double, 4>> centroids;   // k rows
    double inertia = 0;                             // total within-cluster squared distance
    int iterations = 0;
    std::vector<double> inertia_trace;              // after each assignment step
};

// Lloyd's algorithm with k-means++ seeding from a deterministic generator.
// Stops on label stability or max_iter; an emptied cluster is re-seeded to
// the point farthest from its assigned centroid.
ClusterResult kmeans(const AttributeMatrix& X, int k, uint64_t seed, int max_iter = 100);

}  // namespace ssikit
