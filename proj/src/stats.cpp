#include "ssikit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssikit/error.hpp"

namespace ssikit {

Mat4 inverse_correlation(const Mat4& R_in) {
    Mat4 R = 0.5 * (R_in + R_in.transpose());
    Eigen::SelfAdjointEigenSolver<Mat4> es(R);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo >= 1e12)
        throw ValidationError(
            "correlation matrix is singular or near-singular (multicollinearity); "
            "consider removing one of the attributes");
    return R.inverse();
}

Mat4 correlation_matrix(const AttributeMatrix& X) {
    const std::size_t n = X.rows();
    if (n < 3)
        throw ValidationError("correlation requires at least 3 rows, got " + std::to_string(n));

    std::array<double, 4> mean{};
    std::array<double, 4> lo = X.values[0], hi = X.values[0];
    for (const auto& row : X.values)
        for (int j = 0; j < 4; ++j) {
            mean[j] += row[j];
            lo[j] = std::min(lo[j], row[j]);
            hi[j] = std::max(hi[j], row[j]);
        }
    for (int j = 0; j < 4; ++j) mean[j] /= static_cast<double>(n);

    Mat4 cov = Mat4::Zero();
    for (const auto& row : X.values) {
        std::array<double, 4> d{};
        for (int j = 0; j < 4; ++j) d[j] = row[j] - mean[j];
        for (int j = 0; j < 4; ++j)
            for (int k = j; k < 4; ++k) cov(j, k) += d[j] * d[k];
    }

    std::array<double, 4> sd{};
    for (int j = 0; j < 4; ++j) {
        if (lo[j] == hi[j] || cov(j, j) <= 0.0)
            throw ValidationError("attribute '" + std::string(kAttributeNames[j]) +
                                  "' has zero variance");
        sd[j] = std::sqrt(cov(j, j));
    }

    Mat4 R;
    for (int j = 0; j < 4; ++j) {
        R(j, j) = 1.0;
        for (int k = j + 1; k < 4; ++k) {
            double r = cov(j, k) / (sd[j] * sd[k]);
            r = std::clamp(r, -1.0, 1.0);
            R(j, k) = r;
            R(k, j) = r;
        }
    }
    return R;
}

Mat4 partial_correlations(const Mat4& R) {
    Mat4 inv = inverse_correlation(R);
    Mat4 P;
    for (int j = 0; j < 4; ++j) {
        P(j, j) = 1.0;
        for (int k = j + 1; k < 4; ++k) {
            double p = -inv(j, k) / std::sqrt(inv(j, j) * inv(k, k));
            P(j, k) = p;
            P(k, j) = p;
        }
    }
    return P;
}

KmoResult kmo(const Mat4& R) {
    Mat4 P = partial_correlations(R);

    double sum_r2 = 0, sum_p2 = 0;
    Vec4 r2_row = Vec4::Zero(), p2_row = Vec4::Zero();
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            if (j == k) continue;
            double r2 = R(j, k) * R(j, k);
            double p2 = P(j, k) * P(j, k);
            sum_r2 += r2;
            sum_p2 += p2;
            r2_row(j) += r2;
            p2_row(j) += p2;
        }
    }
    if (sum_r2 == 0.0)
        throw ValidationError(
            "KMO undefined: attributes are uncorrelated (independent attributes)");

    KmoResult out;
    out.kmo = sum_r2 / (sum_r2 + sum_p2);
    for (int j = 0; j < 4; ++j) {
        double denom = r2_row(j) + p2_row(j);
        out.msa(j) = denom > 0 ? r2_row(j) / denom : 0.0;
    }
    out.factorable = out.kmo >= 0.6;
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: sequences have different lengths");
    const std::size_t n = x.size();
    if (n < 3)
        throw ValidationError("pearson requires at least 3 observations, got " +
                              std::to_string(n));

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw ValidationError("pearson: zero variance in input sequence");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationSummary correlation_summary(const AttributeMatrix& X) {
    CorrelationSummary s;
    s.r_matrix = correlation_matrix(X);
    s.partials = partial_correlations(s.r_matrix);
    KmoResult k = kmo(s.r_matrix);
    s.kmo = k.kmo;
    s.msa = k.msa;
    s.factorable = k.factorable;
    s.n_observations = X.rows();
    return s;
}

}  // namespace ssikit
