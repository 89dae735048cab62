#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>

#include "ssikit/ingest.hpp"

namespace ssikit {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// Pearson correlation matrix of the four attribute columns.
// Requires >= 3 rows and nonzero variance in every column.
Mat4 correlation_matrix(const AttributeMatrix& X);

// Inverse of a correlation matrix, symmetrized first and rejected when the
// condition number reaches 1e12. Shared by the partial-correlation and
// communality seeding paths.
Mat4 inverse_correlation(const Mat4& R);

// Anti-image partials: p_jk = -inv(R)_jk / sqrt(inv(R)_jj inv(R)_kk),
// diagonal set to 1. R is symmetrized before inversion.
Mat4 partial_correlations(const Mat4& R);

struct KmoResult {
    double kmo = 0;
    Vec4 msa = Vec4::Zero();  // per-variable sampling adequacy, diagnostic only
    bool factorable = false;  // kmo >= 0.6
};

// Kaiser-Meyer-Olkin sampling adequacy. Throws when all off-diagonal
// correlations are zero (the statistic is 0/0 there).
KmoResult kmo(const Mat4& R);

double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationSummary {
    Mat4 r_matrix;
    Mat4 partials;
    double kmo = 0;
    Vec4 msa = Vec4::Zero();
    bool factorable = false;
    std::size_t n_observations = 0;
};

CorrelationSummary correlation_summary(const AttributeMatrix& X);

}  // namespace ssikit
