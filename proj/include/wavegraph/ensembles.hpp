#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "wavegraph/graph.hpp"

namespace wavegraph {

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix, with the phase-of-R correction.
inline Matrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

/// COE-distributed symmetric unitary S = U U^T, the time-reversal-invariant
/// vertex ensemble.
inline Matrix random_symmetric_unitary(int n, std::mt19937_64& rng) {
    const Matrix u = random_unitary(n, rng);
    return u * u.transpose();
}

/// Poisson (uncorrelated) level sequence with unit mean spacing.
inline std::vector<double> poisson_levels(int count, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(count);
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
        acc += expo(rng);
        x[i] = acc;
    }
    return x;
}

/// Unfolded spacings of the central `keep_fraction` of a GOE matrix
/// spectrum, unfolded with the exact semicircle counting function.
inline std::vector<double> goe_spacings(int n, std::mt19937_64& rng,
                                        double keep_fraction = 0.8) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
    const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& ev = es.eigenvalues();

    const double R = std::sqrt(2.0 * double(n));  // semicircle edge
    auto staircase = [&](double x) {
        const double t = std::clamp(x / R, -1.0, 1.0);
        return double(n) * (0.5 + (t * std::sqrt(1.0 - t * t) +
                                   std::asin(t)) /
                                      std::numbers::pi);
    };
    const int lo = int(n * 0.5 * (1.0 - keep_fraction));
    const int hi = n - lo;
    std::vector<double> sp;
    sp.reserve(hi - lo);
    for (int i = lo; i + 1 < hi; ++i)
        sp.push_back(staircase(ev(i + 1)) - staircase(ev(i)));
    return sp;
}

}  // namespace wavegraph
