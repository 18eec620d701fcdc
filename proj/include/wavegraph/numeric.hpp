#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavegraph {

/// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n)
            throw std::invalid_argument("spline needs at least 3 points");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i] < x_[i + 1]))
                throw std::invalid_argument(
                    "spline abscissae must be strictly increasing");
        // second derivatives by the standard tridiagonal solve
        std::vector<double> u(n, 0.0);
        m_.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
            const double p = sig * m_[i - 1] + 2.0;
            m_[i] = (sig - 1.0) / p;
            const double d =
                (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
                (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
            u[i] = (6.0 * d / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
        }
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = m_[i] * m_[i + 1] + u[i];
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

    double operator()(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] > x ? hi : lo) = mid;
        }
        const double h = x_[hi] - x_[lo];
        const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
        return a * y_[lo] + b * y_[hi] +
               ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) *
                   (h * h) / 6.0;
    }

    double derivative(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] > x ? hi : lo) = mid;
        }
        const double h = x_[hi] - x_[lo];
        const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
        return (y_[hi] - y_[lo]) / h +
               (-(3.0 * a * a - 1.0) * m_[lo] +
                (3.0 * b * b - 1.0) * m_[hi]) *
                   h / 6.0;
    }

private:
    std::vector<double> x_, y_;
    std::vector<double> m_;  // second derivatives
};

/// In-place radix-2 decimation-in-time FFT; size must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)))
        throw std::invalid_argument("FFT size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang =
            2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : a) v /= double(n);
}

/// Smallest power of two >= n.
inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace wavegraph
