#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavegraph/evolution.hpp"
#include "wavegraph/graph.hpp"
#include "wavegraph/spectral.hpp"

namespace wavegraph {

/// Normalized per-bond probabilities from measured or modelled bond
/// intensities. Third-harmonic imaging reports the cube of the local
/// intensity, so such inputs are cube-rooted before normalization.
inline std::vector<double> bond_probabilities(std::vector<double> intensity,
                                              bool third_harmonic = false) {
    if (intensity.empty()) throw std::invalid_argument("no bond intensities");
    double total = 0.0;
    for (double& v : intensity) {
        if (v < 0.0) throw std::invalid_argument("negative bond intensity");
        if (third_harmonic) v = std::cbrt(v);
        total += v;
    }
    if (total <= 0.0)
        throw std::invalid_argument("all bond intensities are zero");
    for (double& v : intensity) v /= total;
    return intensity;
}

/// Shannon entropy with the 0 ln 0 = 0 convention.
inline double shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

/// Entropy normalized by its equipartition maximum ln(B).
inline double normalized_entropy(const std::vector<double>& p) {
    if (p.size() < 2)
        throw std::invalid_argument("normalized entropy needs B >= 2 bonds");
    return shannon_entropy(p) / std::log(double(p.size()));
}

/// Inverse participation ratio sum p_b^2 (1/B delocalized .. 1 localized).
inline double inverse_participation_ratio(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return s;
}

struct ModeLocalization {
    double k = 0.0;
    double entropy_norm = 0.0;
    double ipr = 0.0;
    std::vector<double> probabilities;
};

inline ModeLocalization mode_localization(const Graph& g, const Matrix& sigma,
                                          double k_p,
                                          IndexModel model =
                                              IndexModel::ConstantNeff) {
    const Eigenmode mode = eigenmode_at(g, sigma, k_p, model);
    ModeLocalization ml;
    ml.k = k_p;
    ml.probabilities = bond_probabilities(mode.bond_intensity);
    ml.entropy_norm = normalized_entropy(ml.probabilities);
    ml.ipr = inverse_participation_ratio(ml.probabilities);
    return ml;
}

struct EnsembleLocalization {
    double mean_entropy_norm = 0.0;
    double std_entropy_norm = 0.0;
    double mean_ipr = 0.0;
    int modes = 0;
    std::vector<ModeLocalization> per_mode;
};

/// Localization statistics over every eigenmode of a computed spectrum.
inline EnsembleLocalization ensemble_localization(
    const Graph& g, const Matrix& sigma, const ResonanceSet& spectrum,
    IndexModel model = IndexModel::ConstantNeff) {
    EnsembleLocalization out;
    double s1 = 0.0, s2 = 0.0, ipr1 = 0.0;
    for (const auto& r : spectrum.roots) {
        ModeLocalization ml = mode_localization(g, sigma, r.k, model);
        s1 += ml.entropy_norm;
        s2 += ml.entropy_norm * ml.entropy_norm;
        ipr1 += ml.ipr;
        out.per_mode.push_back(std::move(ml));
    }
    out.modes = int(out.per_mode.size());
    if (out.modes == 0) throw std::invalid_argument("empty spectrum");
    out.mean_entropy_norm = s1 / out.modes;
    out.std_entropy_norm = std::sqrt(
        std::max(0.0, s2 / out.modes -
                          out.mean_entropy_norm * out.mean_entropy_norm));
    out.mean_ipr = ipr1 / out.modes;
    return out;
}

}  // namespace wavegraph
