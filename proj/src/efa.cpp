#include "ssikit/efa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssikit/error.hpp"

namespace ssikit {

Vec4 initial_communalities(const Mat4& R) {
    Mat4 inv = inverse_correlation(R);
    Vec4 h;
    for (int j = 0; j < 4; ++j) h(j) = 1.0 - 1.0 / inv(j, j);
    return h;
}

FactorSolution principal_axis_factor(const Mat4& R_in, double tol, int max_iter) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (max_iter < 1) throw ValidationError("max_iter must be at least 1");

    Mat4 R = 0.5 * (R_in + R_in.transpose());
    Vec4 h = initial_communalities(R);
    Vec4 loadings = Vec4::Zero();
    int iter = 0;
    bool converged = false;
    while (iter < max_iter) {
        Mat4 reduced = R;
        reduced.diagonal() = h;
        Eigen::SelfAdjointEigenSolver<Mat4> es(reduced);
        double lead = es.eigenvalues()(3);  // eigenvalues sorted ascending
        if (lead <= 0.0)
            throw ValidationError("no common factor: leading eigenvalue of the reduced "
                                  "matrix is not positive");
        loadings = std::sqrt(lead) * es.eigenvectors().col(3);
        Vec4 h_new = loadings.array().square();
        double delta = (h_new - h).cwiseAbs().maxCoeff();
        h = h_new;
        ++iter;
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    if (loadings.sum() < 0.0) loadings = -loadings;

    FactorSolution s;
    s.loadings = loadings;
    s.communalities = loadings.array().square();
    s.weights = normalized_weights(s.communalities);
    s.iterations = iter;
    s.converged = converged;
    s.tolerance = tol;
    return s;
}

Vec4 normalized_weights(const Vec4& communalities) {
    double total = communalities.sum();
    if (total <= 0.0)
        throw ValidationError("all communalities are zero; weights undefined");
    return communalities / total;
}

SsiVector compute_ssi(const AttributeMatrix& X, const Vec4& w) {
    double wsum = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (w(j) < 0.0) throw ValidationError("weights must be non-negative");
        wsum += w(j);
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw ValidationError("weights must sum to 1");

    SsiVector out;
    out.block_ids = X.block_ids;
    out.values.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto& row = X.values[i];
        double v = 0.0;
        for (int j = 0; j < 4; ++j) {
            if (row[j] < 0.0 || row[j] > 1.0)
                throw ValidationError("attribute value outside [0,1] for block " +
                                      X.block_ids[i]);
            v += row[j] * w(j);
        }
        out.values.push_back(std::clamp(v, 0.0, 1.0));  // shave sub-ulp spill
    }
    return out;
}

double silverman_bandwidth(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw ValidationError("bandwidth selection needs at least 2 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    double mean = 0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    auto order_stat = [&](double p) {
        double h = (static_cast<double>(n) - 1.0) * p;
        std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= n) return sorted.back();
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    };
    double iqr = order_stat(0.75) - order_stat(0.25);

    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    if (spread <= 0.0) spread = 0.01;  // point mass; any small kernel works
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

KdeCurve kde_curve(std::span<const double> values, double bandwidth, int grid) {
    if (grid < 2) throw ValidationError("KDE grid must have at least 2 points");
    if (values.empty() || !(bandwidth > 0.0))
        throw ValidationError("KDE needs values and a positive bandwidth");
    KdeCurve c;
    c.x.resize(grid);
    c.density.assign(grid, 0.0);
    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    const double norm =
        1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(two_pi));
    for (int g = 0; g < grid; ++g)
        c.x[g] = static_cast<double>(g) / static_cast<double>(grid - 1);
    for (int g = 0; g < grid; ++g) {
        double acc = 0;
        for (double v : values) {
            double z = (c.x[g] - v) / bandwidth;
            acc += std::exp(-0.5 * z * z);
        }
        c.density[g] = acc * norm;
    }
    return c;
}

std::vector<KdePeak> find_modes(const SsiVector& ssi, double bandwidth, int grid) {
    const std::size_t n = ssi.size();
    if (n < 10)
        throw ValidationError("mode detection requires at least 10 values, got " +
                              std::to_string(n));
    if (grid < 16) throw ValidationError("KDE grid must have at least 16 points");
    double h = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(ssi.values);
    if (!(h > 0.0)) throw ValidationError("bandwidth must be positive");

    KdeCurve c = kde_curve(ssi.values, h, grid);
    const auto& d = c.density;

    // Scan runs of equal density so a flat top counts once.
    std::vector<KdePeak> peaks;
    int i = 0;
    while (i < grid) {
        int j = i;
        while (j + 1 < grid && d[j + 1] == d[i]) ++j;
        bool left_ok = (i == 0) || d[i - 1] < d[i];
        bool right_ok = (j == grid - 1) || d[j + 1] < d[i];
        if (left_ok && right_ok) peaks.push_back({c.x[(i + j) / 2], d[i]});
        i = j + 1;
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const KdePeak& a, const KdePeak& b) {
        return a.density > b.density;
    });
    return peaks;
}

}  // namespace ssikit
