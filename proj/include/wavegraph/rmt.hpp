#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavegraph {

// ---------------------------------------------------------------------------
// Unfolding
// ---------------------------------------------------------------------------

/// Maps levels to unit mean spacing through the smooth counting function:
/// x_i = index * L_tot * k_i / pi.
inline std::vector<double> unfold(const std::vector<double>& levels,
                                  double index, double total_length) {
    std::vector<double> x;
    x.reserve(levels.size());
    const double c = index * total_length / std::numbers::pi;
    for (double k : levels) x.push_back(c * k);
    if (!std::is_sorted(x.begin(), x.end()))
        throw std::invalid_argument("levels must be sorted ascending");
    return x;
}

/// Calibrated index that makes the smooth count over [k_min, k_max] equal
/// the observed level count.
inline double calibrate_index(int level_count, double total_length,
                              double k_min, double k_max) {
    if (level_count <= 0 || k_max <= k_min)
        throw std::invalid_argument("bad calibration window");
    return double(level_count) * std::numbers::pi /
           (total_length * (k_max - k_min));
}

inline std::vector<double> spacings(const std::vector<double>& unfolded) {
    if (unfolded.size() < 2)
        throw std::invalid_argument("need at least two levels");
    std::vector<double> s(unfolded.size() - 1);
    for (std::size_t i = 0; i + 1 < unfolded.size(); ++i)
        s[i] = unfolded[i + 1] - unfolded[i];
    return s;
}

// ---------------------------------------------------------------------------
// Reference ensembles
// ---------------------------------------------------------------------------

enum class Ensemble { GOE, GUE, Poisson };

/// Wigner surmise densities.
inline double nnsd_pdf(Ensemble e, double s) {
    const double pi = std::numbers::pi;
    switch (e) {
        case Ensemble::GOE:
            return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
        case Ensemble::GUE:
            return (32.0 / (pi * pi)) * s * s * std::exp(-4.0 * s * s / pi);
        case Ensemble::Poisson:
            return std::exp(-s);
    }
    return 0.0;
}

inline double nnsd_cdf(Ensemble e, double s) {
    const double pi = std::numbers::pi;
    if (s <= 0.0) return 0.0;
    switch (e) {
        case Ensemble::GOE:
            return 1.0 - std::exp(-0.25 * pi * s * s);
        case Ensemble::GUE:
            return std::erf(2.0 * s / std::sqrt(pi)) -
                   (4.0 * s / pi) * std::exp(-4.0 * s * s / pi);
        case Ensemble::Poisson:
            return 1.0 - std::exp(-s);
    }
    return 0.0;
}

/// Two-sided Kolmogorov-Smirnov distance of a sample to a reference CDF.
inline double ks_distance(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double c = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - c));
        d = std::max(d, std::abs(i / n - c));
    }
    return d;
}

inline double ks_distance(const std::vector<double>& sample, Ensemble e) {
    return ks_distance(sample, [e](double s) { return nnsd_cdf(e, s); });
}

// ---------------------------------------------------------------------------
// Nearest-neighbour spacing distribution
// ---------------------------------------------------------------------------

struct Nnsd {
    std::vector<double> bin_edges;  // empty when cdf_only
    std::vector<double> density;    // normalized histogram
    std::vector<double> sorted_spacings;
    double ks_goe = 0.0, ks_gue = 0.0, ks_poisson = 0.0;
    bool cdf_only = false;  // too few spacings for a meaningful histogram
};

/// Histogram with Freedman-Diaconis bin width floored at 0.1; below 50
/// spacings only the empirical CDF and KS distances are reported.
inline Nnsd nnsd(const std::vector<double>& sp) {
    Nnsd out;
    out.sorted_spacings = sp;
    std::sort(out.sorted_spacings.begin(), out.sorted_spacings.end());
    out.ks_goe = ks_distance(sp, Ensemble::GOE);
    out.ks_gue = ks_distance(sp, Ensemble::GUE);
    out.ks_poisson = ks_distance(sp, Ensemble::Poisson);
    const std::size_t n = sp.size();
    if (n < 50) {
        out.cdf_only = true;
        return out;
    }
    const auto& s = out.sorted_spacings;
    const double q1 = s[n / 4], q3 = s[(3 * n) / 4];
    double width = 2.0 * (q3 - q1) / std::cbrt(double(n));
    width = std::max(width, 0.1);
    const double lo = 0.0, hi = s.back() + 0.5 * width;
    const int nbins = std::max(1, int(std::ceil((hi - lo) / width)));
    out.bin_edges.resize(nbins + 1);
    for (int i = 0; i <= nbins; ++i) out.bin_edges[i] = lo + i * width;
    out.density.assign(nbins, 0.0);
    for (double v : s) {
        int b = std::min(nbins - 1, int((v - lo) / width));
        out.density[b] += 1.0;
    }
    for (double& d : out.density) d /= double(n) * width;
    return out;
}

// ---------------------------------------------------------------------------
// Number variance and spectral rigidity
// ---------------------------------------------------------------------------

struct LongRangeStat {
    double value = 0.0;
    int windows = 0;
    bool truncated = false;  // too few windows for a stable average
};

/// Sigma^2(L) = <(n(L) - L)^2> over windows of length L slid in steps of
/// 0.25 L across the unfolded spectrum.
inline LongRangeStat number_variance(const std::vector<double>& unfolded,
                                     double L) {
    if (L <= 0.0) throw std::domain_error("window length must be positive");
    LongRangeStat out;
    const double lo = unfolded.front(), hi = unfolded.back();
    double acc = 0.0;
    for (double x = lo; x + L <= hi; x += 0.25 * L) {
        const auto a = std::lower_bound(unfolded.begin(), unfolded.end(), x);
        const auto b = std::lower_bound(a, unfolded.end(), x + L);
        const double n = double(b - a);
        acc += (n - L) * (n - L);
        ++out.windows;
    }
    if (out.windows == 0)
        throw std::domain_error("window longer than the unfolded spectrum");
    out.value = acc / out.windows;
    out.truncated = out.windows < 10;
    return out;
}

namespace detail {

/// Exact least-squares deviation of the staircase from a straight line over
/// [a, a+L]: min_{A,B} (1/L) int (N(x) - A - Bx)^2 dx, with N piecewise
/// constant. All integrals of the staircase are evaluated in closed form.
inline double delta3_window(const std::vector<double>& x, double a, double L) {
    const double b = a + L;
    const auto first = std::lower_bound(x.begin(), x.end(), a);
    const auto last = std::lower_bound(first, x.end(), b);
    // staircase value on [a,b) starts at N0 = #levels below a
    double N = double(first - x.begin());
    // segment boundaries inside the window
    double S0 = 0.0, S1 = 0.0, S2 = 0.0;  // int N, int xN, int N^2
    double xprev = a;
    auto add = [&](double xa, double xb, double val) {
        S0 += val * (xb - xa);
        S1 += val * 0.5 * (xb * xb - xa * xa);
        S2 += val * val * (xb - xa);
    };
    for (auto it = first; it != last; ++it) {
        add(xprev, *it, N);
        xprev = *it;
        N += 1.0;
    }
    add(xprev, b, N);
    // normal equations for A + Bx
    const double m0 = L;
    const double m1 = 0.5 * (b * b - a * a);
    const double m2 = (b * b * b - a * a * a) / 3.0;
    const double det = m0 * m2 - m1 * m1;
    const double A = (m2 * S0 - m1 * S1) / det;
    const double B = (m0 * S1 - m1 * S0) / det;
    const double resid = S2 - 2.0 * A * S0 - 2.0 * B * S1 + A * A * m0 +
                         2.0 * A * B * m1 + B * B * m2;
    return std::max(resid, 0.0) / L;
}

}  // namespace detail

/// Spectral rigidity Delta_3(L): window-averaged exact least-squares
/// staircase deviation, windows slid in steps of 0.25 L.
inline LongRangeStat rigidity_delta3(const std::vector<double>& unfolded,
                                     double L) {
    if (L <= 0.0) throw std::domain_error("window length must be positive");
    LongRangeStat out;
    const double lo = unfolded.front(), hi = unfolded.back();
    double acc = 0.0;
    for (double x = lo; x + L <= hi; x += 0.25 * L) {
        acc += detail::delta3_window(unfolded, x, L);
        ++out.windows;
    }
    if (out.windows == 0)
        throw std::domain_error("window longer than the unfolded spectrum");
    out.value = acc / out.windows;
    out.truncated = out.windows < 10;
    return out;
}

/// Closed-form large-L references for Sigma^2(L); near L = 0 every point
/// process obeys Sigma^2 -> L, so the reference is capped by L where the
/// asymptotic form exceeds it.
inline double sigma2_reference(Ensemble e, double L) {
    if (L <= 0.0) return 0.0;
    const double pi = std::numbers::pi;
    constexpr double euler_gamma = 0.5772156649015329;
    double asym;
    switch (e) {
        case Ensemble::GOE:
            asym = (2.0 / (pi * pi)) *
                   (std::log(2.0 * pi * L) + euler_gamma + 1.0 -
                    pi * pi / 8.0);
            break;
        case Ensemble::GUE:
            asym = (1.0 / (pi * pi)) *
                   (std::log(2.0 * pi * L) + euler_gamma + 1.0);
            break;
        case Ensemble::Poisson:
            return L;
    }
    return std::min(asym, L);
}

/// Delta_3(L) from Sigma^2 via the exact identity
/// Delta_3(L) = (2/L^4) int_0^L (L^3 - 2 L^2 r + r^3) Sigma^2(r) dr,
/// evaluated by Simpson quadrature.
inline double delta3_from_sigma2(const std::function<double(double)>& sigma2,
                                 double L, int panels = 2000) {
    const double h = L / (2 * panels);
    auto f = [&](double r) {
        return (L * L * L - 2.0 * L * L * r + r * r * r) * sigma2(r);
    };
    double acc = f(0.0) + f(L);
    for (int i = 1; i < 2 * panels; ++i)
        acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return (2.0 / (L * L * L * L)) * acc * h / 3.0;
}

/// Reference rigidity curves. Poisson has the closed form L/15; the rigid
/// picket-fence limit is 1/12.
inline double delta3_reference(Ensemble e, double L) {
    if (e == Ensemble::Poisson) return L / 15.0;
    return delta3_from_sigma2(
        [e](double r) { return sigma2_reference(e, r); }, L);
}

inline constexpr double delta3_picket_fence() { return 1.0 / 12.0; }

}  // namespace wavegraph
