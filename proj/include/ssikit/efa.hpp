#pragma once

#include <span>
#include <vector>

#include "ssikit/ingest.hpp"
#include "ssikit/ssi.hpp"
#include "ssikit/stats.hpp"

namespace ssikit {

// Single-factor solution. Communalities are exactly the squared loadings and
// weights are communalities normalized to sum 1.
struct FactorSolution {
    Vec4 loadings = Vec4::Zero();
    Vec4 communalities = Vec4::Zero();
    Vec4 weights = Vec4::Zero();
    int iterations = 0;
    bool converged = false;
    double tolerance = 0;
};

// Squared multiple correlations, h0_j = 1 - 1/inv(R)_jj.
Vec4 initial_communalities(const Mat4& R);

// Iterated principal axis factoring: replace diag(R) with the current
// communalities, take the leading eigenpair of the reduced matrix, square the
// loadings, repeat until max |dh| < tol or max_iter. Sign is fixed so the
// loading sum is non-negative.
FactorSolution principal_axis_factor(const Mat4& R, double tol = 1e-6, int max_iter = 200);

// w_j = h_j / sum(h). Throws when all communalities are zero.
Vec4 normalized_weights(const Vec4& communalities);

// SSI_i = sum_j x_ij w_j. Weights must be non-negative and sum to 1; the
// result is clamped against sub-ulp spill so values stay inside [0, 1].
SsiVector compute_ssi(const AttributeMatrix& X, const Vec4& w);

struct KdePeak {
    double location = 0;
    double density = 0;
};

struct KdeCurve {
    std::vector<double> x;
    std::vector<double> density;
};

// Rule-of-thumb bandwidth, 0.9 min(sd, iqr/1.34) n^(-1/5).
double silverman_bandwidth(std::span<const double> values);

// Gaussian KDE evaluated on a uniform grid over [0, 1].
KdeCurve kde_curve(std::span<const double> values, double bandwidth, int grid);

// Local maxima of the KDE, highest density first. bandwidth <= 0 selects the
// Silverman rule.
std::vector<KdePeak> find_modes(const SsiVector& ssi, double bandwidth = 0.0, int grid = 512);

}  // namespace ssikit
