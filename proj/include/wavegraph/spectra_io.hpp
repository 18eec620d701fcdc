#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace wavegraph {

// ---------------------------------------------------------------------------
// Normalization of raw transmission scans
// ---------------------------------------------------------------------------

struct NormalizedSpectrum {
    std::vector<double> lambda_um;     // ascending
    std::vector<double> transmission;  // raw / reference, clipped at 1.2
    int clipped_points = 0;
};

/// Divides a raw scan by a reference scan. A non-positive reference sample
/// is an error; ratios above 1.2 (reference drift artefacts) are clipped and
/// counted.
inline NormalizedSpectrum normalize_spectrum(
    const std::vector<double>& lambda_um, const std::vector<double>& raw,
    const std::vector<double>& reference, double clip = 1.2) {
    if (lambda_um.size() != raw.size() || raw.size() != reference.size())
        throw std::invalid_argument("ragged spectrum arrays");
    if (lambda_um.size() < 2) throw std::invalid_argument("spectrum too short");
    NormalizedSpectrum out;
    out.lambda_um = lambda_um;
    out.transmission.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (reference[i] <= 0.0)
            throw std::invalid_argument(
                "non-positive reference power at sample " + std::to_string(i));
        double t = raw[i] / reference[i];
        if (t > clip) {
            t = clip;
            ++out.clipped_points;
        }
        out.transmission[i] = t;
    }
    if (!std::is_sorted(out.lambda_um.begin(), out.lambda_um.end()))
        throw std::invalid_argument("wavelengths must be ascending");
    return out;
}

// ---------------------------------------------------------------------------
// Resonance dips
// ---------------------------------------------------------------------------

struct Dip {
    int index = -1;
    double lambda_um = 0.0;
    double depth = 0.0;       // local baseline minus minimum
    double prominence = 0.0;  // topographic prominence of the inverted trace
};

/// Local minima of the transmission with prominence >= `prominence` and
/// depth >= `min_depth` (absolute transmission units).
inline std::vector<Dip> find_dips(const NormalizedSpectrum& s,
                                  double prominence = 0.05,
                                  double min_depth = 0.1) {
    const auto& t = s.transmission;
    const int n = int(t.size());
    std::vector<Dip> dips;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(t[i] < t[i - 1] && t[i] <= t[i + 1])) continue;
        // prominence of the inverted trace: climb to the lowest of the two
        // highest barriers before a deeper minimum is reached
        double left_peak = t[i];
        for (int j = i - 1; j >= 0; --j) {
            if (t[j] < t[i]) break;
            left_peak = std::max(left_peak, t[j]);
        }
        double right_peak = t[i];
        for (int j = i + 1; j < n; ++j) {
            if (t[j] < t[i]) break;
            right_peak = std::max(right_peak, t[j]);
        }
        const double prom = std::min(left_peak, right_peak) - t[i];
        const double depth = std::max(left_peak, right_peak) - t[i];
        if (prom >= prominence && depth >= min_depth)
            dips.push_back({i, s.lambda_um[i], depth, prom});
    }
    return dips;
}

// ---------------------------------------------------------------------------
// Lorentzian line fits
// ---------------------------------------------------------------------------

struct LorentzianFit {
    double k0 = 0.0;        // center, rad/um
    double gamma_k = 0.0;   // FWHM in k
    double depth = 0.0;
    double baseline = 1.0;
    double lambda0_um = 0.0;
    double fwhm_lambda_um = 0.0;
    double q = 0.0;           // lambda0 / FWHM(lambda)
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool undersampled = false;  // fewer than 7 samples across the FWHM
};

/// Damped Gauss-Newton fit of T(k) = B - A (g/2)^2 / ((k-k0)^2 + (g/2)^2)
/// on a window around a detected dip. The fit is done in wavenumber, where
/// an isolated lossy resonance is an exact Lorentzian.
inline LorentzianFit fit_lorentzian(const NormalizedSpectrum& s,
                                    const Dip& dip, int max_iter = 100) {
    const auto& t = s.transmission;
    const int n = int(t.size());
    if (dip.index <= 0 || dip.index >= n - 1)
        throw std::invalid_argument("dip index out of range");

    // expand the window until the trace recovers most of the depth
    const double recover = t[dip.index] + 0.8 * dip.depth;
    int lo = dip.index, hi = dip.index;
    while (lo > 0 && t[lo] < recover) --lo;
    while (hi < n - 1 && t[hi] < recover) ++hi;
    lo = std::max(0, lo - 2);
    hi = std::min(n - 1, hi + 2);
    const int m = hi - lo + 1;
    if (m < 5) throw std::invalid_argument("too few samples around dip");

    Eigen::VectorXd k(m), y(m);
    for (int i = 0; i < m; ++i) {
        k(i) = 2.0 * std::numbers::pi / s.lambda_um[lo + i];
        y(i) = t[lo + i];
    }

    // initial guess: half-depth crossings bracket the FWHM
    double B = std::max(t[lo], t[hi]);
    double A = B - t[dip.index];
    double k0 = 2.0 * std::numbers::pi / dip.lambda_um;
    const double half = t[dip.index] + 0.5 * A;
    double kl = k(0), kr = k(m - 1);
    for (int i = dip.index; i > lo; --i)
        if (t[i] >= half) { kl = 2.0 * std::numbers::pi / s.lambda_um[i]; break; }
    for (int i = dip.index; i < hi; ++i)
        if (t[i] >= half) { kr = 2.0 * std::numbers::pi / s.lambda_um[i]; break; }
    double w = std::max(0.5 * std::abs(kl - kr), 1e-12);  // g/2

    auto sse = [&](double B_, double A_, double k0_, double w_) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double D = (k(i) - k0_) * (k(i) - k0_) + w_ * w_;
            const double r = y(i) - (B_ - A_ * w_ * w_ / D);
            acc += r * r;
        }
        return acc;
    };

    LorentzianFit fit;
    double prev = sse(B, A, k0, w);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::MatrixXd J(m, 4);
        Eigen::VectorXd r(m);
        for (int i = 0; i < m; ++i) {
            const double dk = k(i) - k0;
            const double D = dk * dk + w * w;
            const double lor = w * w / D;
            r(i) = y(i) - (B - A * lor);
            J(i, 0) = 1.0;
            J(i, 1) = -lor;
            J(i, 2) = -A * lor * 2.0 * dk / D;
            J(i, 3) = -A * 2.0 * w * dk * dk / (D * D);
        }
        Eigen::Vector4d step =
            (J.transpose() * J +
             1e-12 * Eigen::Matrix4d::Identity())
                .ldlt()
                .solve(J.transpose() * r);
        double scale = 1.0;
        double B2, A2, k02, w2, cur;
        for (int half_steps = 0;; ++half_steps) {
            B2 = B + scale * step(0);
            A2 = A + scale * step(1);
            k02 = k0 + scale * step(2);
            w2 = std::abs(w + scale * step(3));
            cur = sse(B2, A2, k02, w2);
            if (cur <= prev || half_steps >= 20) break;
            scale *= 0.5;
        }
        const double move = std::abs(scale) * step.norm();
        B = B2; A = A2; k0 = k02; w = w2;
        fit.iterations = it + 1;
        if (std::abs(prev - cur) <= 1e-14 * std::max(prev, 1e-30) &&
            move <= 1e-12 * std::abs(k0)) {
            prev = cur;
            fit.converged = true;
            break;
        }
        prev = cur;
        if (it == max_iter - 1) fit.converged = move < 1e-9 * std::abs(k0);
    }

    fit.k0 = k0;
    fit.gamma_k = 2.0 * w;
    fit.depth = A;
    fit.baseline = B;
    fit.rms_residual = std::sqrt(prev / m);
    fit.lambda0_um = 2.0 * std::numbers::pi / k0;
    fit.fwhm_lambda_um =
        fit.lambda0_um * fit.lambda0_um * fit.gamma_k / (2.0 * std::numbers::pi);
    fit.q = fit.lambda0_um / fit.fwhm_lambda_um;

    int inside = 0;
    for (int i = 0; i < m; ++i)
        if (std::abs(k(i) - k0) <= w) ++inside;
    fit.undersampled = inside < 7;
    return fit;
}

// ---------------------------------------------------------------------------
// Aggregate figures of merit
// ---------------------------------------------------------------------------

struct FinesseEstimate {
    double mean_spacing_um = 0.0;
    double mean_fwhm_um = 0.0;
    double finesse = 0.0;
    int resonances = 0;
};

/// Finesse = mean resonance spacing / mean linewidth over a set of fits.
inline FinesseEstimate finesse(std::vector<LorentzianFit> fits) {
    if (fits.size() < 2)
        throw std::invalid_argument("finesse needs at least two resonances");
    std::sort(fits.begin(), fits.end(),
              [](const LorentzianFit& a, const LorentzianFit& b) {
                  return a.lambda0_um < b.lambda0_um;
              });
    FinesseEstimate est;
    est.resonances = int(fits.size());
    for (std::size_t i = 0; i + 1 < fits.size(); ++i)
        est.mean_spacing_um += fits[i + 1].lambda0_um - fits[i].lambda0_um;
    est.mean_spacing_um /= double(fits.size() - 1);
    for (const auto& f : fits) est.mean_fwhm_um += f.fwhm_lambda_um;
    est.mean_fwhm_um /= double(fits.size());
    est.finesse = est.mean_spacing_um / est.mean_fwhm_um;
    return est;
}

struct IndexEstimate {
    double value = 0.0;
    double uncertainty = 0.0;
};

/// Effective index from the interferometric fringe rate r0 (fringes per
/// unit path-length difference): n_eff = r0 lambda / 2.
inline IndexEstimate neff_from_fringe(double r0, double r0_uncertainty,
                                      double lambda_um) {
    if (r0 <= 0.0) throw std::invalid_argument("fringe rate must be positive");
    return {r0 * lambda_um / 2.0, r0_uncertainty * lambda_um / 2.0};
}

}  // namespace wavegraph
