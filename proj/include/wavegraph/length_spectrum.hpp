#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wavegraph/evolution.hpp"
#include "wavegraph/graph.hpp"
#include "wavegraph/numeric.hpp"

namespace wavegraph {

/// A transmission trace sampled uniformly in wavenumber.
struct Trace {
    std::vector<double> k;      // uniform ascending grid
    std::vector<double> value;  // e.g. |t(k)|^2
};

/// Resamples (wavelength, value) data onto a uniform power-of-two k grid via
/// a natural cubic spline. Input order is arbitrary.
inline Trace resample_uniform_k(std::vector<double> lambda_um,
                                std::vector<double> value,
                                std::size_t min_samples = 4096) {
    if (lambda_um.size() != value.size() || lambda_um.size() < 3)
        throw std::invalid_argument("need at least 3 (lambda, value) samples");
    std::vector<std::pair<double, double>> pts(lambda_um.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (lambda_um[i] <= 0.0)
            throw std::invalid_argument("non-positive wavelength");
        pts[i] = {2.0 * std::numbers::pi / lambda_um[i], value[i]};
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> ks, vs;
    for (const auto& [k, v] : pts) {
        if (!ks.empty() && k == ks.back())
            throw std::invalid_argument("duplicate wavelength sample");
        ks.push_back(k);
        vs.push_back(v);
    }
    const CubicSpline spline(ks, vs);
    const std::size_t n = next_pow2(std::max(min_samples, ks.size()));
    Trace tr;
    tr.k.resize(n);
    tr.value.resize(n);
    const double k0 = ks.front(), k1 = ks.back();
    for (std::size_t i = 0; i < n; ++i) {
        tr.k[i] = k0 + (k1 - k0) * double(i) / double(n - 1);
        tr.value[i] = spline(std::clamp(tr.k[i], k0, k1));
    }
    return tr;
}

enum class Window { Hann, Rectangular };

struct LengthSpectrum {
    std::vector<double> ell;        // optical length axis, um
    std::vector<double> magnitude;  // unit-max normalized
    double bin_um = 0.0;            // FFT resolution 2 pi / (k span)
    double parseval_defect = 0.0;   // relative energy mismatch of the FFT
};

/// Fourier length spectrum of a uniform-k trace: mean-subtracted, windowed,
/// magnitude of the one-sided FFT on the optical length axis
/// ell = 2 pi m / (N dk), normalized to unit maximum.
inline LengthSpectrum length_spectrum(const Trace& tr,
                                      Window window = Window::Hann) {
    const std::size_t n = tr.k.size();
    if (n < 4096)
        throw std::invalid_argument(
            "trace too short: resample to at least 4096 points");
    if (n & (n - 1))
        throw std::invalid_argument(
            "trace length must be a power of two (use resample_uniform_k)");
    if (tr.value.size() != n) throw std::invalid_argument("ragged trace");
    const double dk = tr.k[1] - tr.k[0];

    double mean = 0.0;
    for (double v : tr.value) mean += v;
    mean /= double(n);

    std::vector<std::complex<double>> a(n);
    double in_energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (window == Window::Hann)
            w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) /
                                     double(n - 1));
        const double x = (tr.value[i] - mean) * w;
        a[i] = x;
        in_energy += x * x;
    }
    fft_radix2(a);
    double out_energy = 0.0;
    for (const auto& c : a) out_energy += std::norm(c);
    out_energy /= double(n);

    LengthSpectrum ls;
    ls.parseval_defect =
        std::abs(out_energy - in_energy) / std::max(in_energy, 1e-300);
    ls.bin_um = 2.0 * std::numbers::pi / (dk * double(n));
    ls.ell.resize(n / 2 + 1);
    ls.magnitude.resize(n / 2 + 1);
    double peak = 0.0;
    for (std::size_t m = 0; m <= n / 2; ++m) {
        ls.ell[m] = ls.bin_um * double(m);
        ls.magnitude[m] = std::abs(a[m]);
        peak = std::max(peak, ls.magnitude[m]);
    }
    if (peak > 0.0)
        for (double& v : ls.magnitude) v /= peak;
    return ls;
}

struct SpectrumPeak {
    double ell_um = 0.0;
    double magnitude = 0.0;
};

/// Local maxima above a magnitude threshold, strongest first. The DC bin is
/// excluded.
inline std::vector<SpectrumPeak> find_length_peaks(const LengthSpectrum& ls,
                                                   double threshold = 0.05) {
    std::vector<SpectrumPeak> peaks;
    for (std::size_t i = 1; i + 1 < ls.magnitude.size(); ++i)
        if (ls.magnitude[i] > ls.magnitude[i - 1] &&
            ls.magnitude[i] > ls.magnitude[i + 1] &&
            ls.magnitude[i] > threshold)
            peaks.push_back({ls.ell[i], ls.magnitude[i]});
    std::sort(peaks.begin(), peaks.end(),
              [](const SpectrumPeak& a, const SpectrumPeak& b) {
                  return a.magnitude > b.magnitude;
              });
    return peaks;
}

// ---------------------------------------------------------------------------
// Periodic orbits
// ---------------------------------------------------------------------------

struct Orbit {
    std::vector<int> directed_bonds;  // canonical rotation
    double length_um = 0.0;           // geometric length
    double weight = 0.0;              // product of |Sigma| along the orbit
    int repetition = 1;               // r > 1 for repeated primitive orbits
};

namespace detail {

/// True when `seq` is the lexicographically smallest of its rotations.
inline bool is_canonical_rotation(const std::vector<int>& seq) {
    const std::size_t n = seq.size();
    for (std::size_t s = 1; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = seq[i], b = seq[(i + s) % n];
            if (b < a) return false;
            if (b > a) break;
        }
    }
    return true;
}

inline int repetition_count(const std::vector<int>& seq) {
    const std::size_t n = seq.size();
    for (std::size_t p = 1; p <= n / 2; ++p) {
        if (n % p) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i)
            periodic = seq[i] == seq[i - p];
        if (periodic) return int(n / p);
    }
    return 1;
}

}  // namespace detail

/// All periodic orbits of geometric length up to max_length_um, found by
/// depth-first search on the directed-bond transition structure (an entry
/// Sigma(d', d) != 0 allows the step d -> d'). Orbits are reported once, in
/// canonical rotation; the search aborts if it visits more than `budget`
/// states.
inline std::vector<Orbit> enumerate_orbits(const Graph& g, const Matrix& sigma,
                                           double max_length_um,
                                           long budget = 1000000) {
    if (max_length_um <= 0.0)
        throw std::domain_error("max orbit length must be positive");
    const DirectedBondBasis basis(g);
    const int n = basis.size();
    std::vector<std::vector<int>> next(n);
    for (int d = 0; d < n; ++d)
        for (int dp = 0; dp < n; ++dp)
            if (std::abs(sigma(dp, d)) > 1e-14) next[d].push_back(dp);

    std::vector<Orbit> orbits;
    std::vector<int> path;
    long visited = 0;

    auto dfs = [&](int start, double len, double w, auto&& self) -> void {
        if (++visited > budget)
            throw std::runtime_error(
                "orbit enumeration exceeded its search budget (" +
                std::to_string(budget) + " states); lower max length");
        const int d = path.back();
        for (int dp : next[d]) {
            if (dp < start) continue;  // canonical orbits start at their min
            const double wl = w * std::abs(sigma(dp, d));
            if (dp == start && detail::is_canonical_rotation(path)) {
                Orbit o;
                o.directed_bonds = path;
                o.length_um = len;
                o.weight = wl;
                o.repetition = detail::repetition_count(path);
                orbits.push_back(std::move(o));
            }
            // keep extending through the start bond so that repeated
            // traversals of a primitive orbit are found as well
            const double step = basis.length(dp);
            if (len + step > max_length_um) continue;
            path.push_back(dp);
            self(start, len + step, wl, self);
            path.pop_back();
        }
    };

    for (int d0 = 0; d0 < n; ++d0) {
        if (basis.length(d0) > max_length_um) continue;
        path.assign(1, d0);
        dfs(d0, basis.length(d0), 1.0, dfs);
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const Orbit& a, const Orbit& b) {
                  return a.length_um < b.length_um;
              });
    return orbits;
}

struct PeakMatch {
    SpectrumPeak peak;
    std::vector<Orbit> orbits;  // orbits whose optical length falls in band
};

/// Associates each spectrum peak with the periodic orbits whose optical
/// length n_g * L lies within tol_um of the peak position.
inline std::vector<PeakMatch> match_peaks(const std::vector<SpectrumPeak>& peaks,
                                          const std::vector<Orbit>& orbits,
                                          double n_g, double tol_um) {
    std::vector<PeakMatch> out;
    for (const auto& p : peaks) {
        PeakMatch m;
        m.peak = p;
        for (const auto& o : orbits)
            if (std::abs(n_g * o.length_um - p.ell_um) <= tol_um)
                m.orbits.push_back(o);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace wavegraph
