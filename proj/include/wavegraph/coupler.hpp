#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wavegraph/numeric.hpp"

namespace wavegraph {

/// Coupled-mode model of a directional coupler: the index split
/// dneff(lambda) between the even and odd supermode fixes everything else.
/// The calibration table is smoothed with a natural cubic spline.
class CouplerModel {
public:
    CouplerModel(std::vector<double> lambda_um, std::vector<double> dneff)
        : lambda_min_(0.0), lambda_max_(0.0) {
        if (lambda_um.size() < 3)
            throw std::invalid_argument(
                "coupler calibration needs at least 3 points");
        spline_.emplace(lambda_um, dneff);
        lambda_min_ = spline_->min_x();
        lambda_max_ = spline_->max_x();
    }

    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    bool in_band(double lambda_um) const {
        return lambda_um >= lambda_min_ && lambda_um <= lambda_max_;
    }

    /// Supermode index split; evaluation is confined to the calibrated band
    /// plus a 1% guard on each side.
    double delta_neff(double lambda_um) const {
        const double guard = 0.01 * (lambda_max_ - lambda_min_);
        if (lambda_um < lambda_min_ - guard || lambda_um > lambda_max_ + guard)
            throw std::domain_error(
                "wavelength outside the calibrated coupler band");
        return (*spline_)(std::clamp(lambda_um, lambda_min_, lambda_max_));
    }

    /// Group-index split dng = dneff - lambda d(dneff)/dlambda, central
    /// difference on the spline.
    double delta_ng(double lambda_um, double h = 1e-4) const {
        const double d =
            (delta_neff(lambda_um + h) - delta_neff(lambda_um - h)) /
            (2.0 * h);
        return delta_neff(lambda_um) - lambda_um * d;
    }

private:
    std::optional<CubicSpline> spline_;
    double lambda_min_, lambda_max_;
};

struct Splitting {
    double p_bar = 0.0;    // through-port power fraction
    double p_cross = 0.0;  // coupled-port power fraction, p_bar + p_cross = 1
};

/// Power splitting of a coupler of interaction length l_dc:
/// P_bar = cos^2(pi dneff l / lambda).
inline Splitting splitting(const CouplerModel& m, double lambda_um,
                           double l_dc_um) {
    if (l_dc_um < 0.0) throw std::invalid_argument("negative coupler length");
    const double phase = std::numbers::pi * m.delta_neff(lambda_um) *
                         l_dc_um / lambda_um;
    Splitting s;
    const double c = std::cos(phase);
    s.p_bar = c * c;
    s.p_cross = 1.0 - s.p_bar;  // exact complement by construction
    return s;
}

/// Interaction length giving a 50:50 split: l50 = lambda / (4 dneff).
inline double l50(const CouplerModel& m, double lambda_um) {
    const double d = m.delta_neff(lambda_um);
    if (d <= 0.0)
        throw std::domain_error("non-positive index split, no 50:50 length");
    return lambda_um / (4.0 * d);
}

/// True when the dispersion of the split is too weak for a reliable
/// group-index estimate.
inline bool delta_ng_near_zero(double delta_ng_value, double floor = 0.05) {
    return std::abs(delta_ng_value) < floor;
}

/// Index split recovered from a measured splitting ratio
/// C = P_cross / (P_bar + P_cross) at known interaction length (principal
/// branch of the inversion).
inline double dneff_from_splitting(double lambda_um, double C,
                                   double l_dc_um) {
    if (C < 0.0 || C > 1.0)
        throw std::invalid_argument("splitting ratio outside [0,1]");
    if (l_dc_um <= 0.0)
        throw std::invalid_argument("non-positive coupler length");
    return lambda_um * std::asin(std::sqrt(C)) /
           (std::numbers::pi * l_dc_um);
}

/// Model built from raw bar/cross power measurements (p13 = bar, p14 =
/// cross): ratios are formed pointwise, inverted to dneff, then splined.
inline CouplerModel coupler_model_from_powers(
    const std::vector<double>& lambda_um, const std::vector<double>& p13,
    const std::vector<double>& p14, double l_dc_um) {
    if (lambda_um.size() != p13.size() || p13.size() != p14.size())
        throw std::invalid_argument("ragged power table");
    std::vector<double> dneff(lambda_um.size());
    for (std::size_t i = 0; i < lambda_um.size(); ++i) {
        const double tot = p13[i] + p14[i];
        if (tot <= 0.0)
            throw std::invalid_argument("zero total power in coupler table");
        dneff[i] = dneff_from_splitting(lambda_um[i], p14[i] / tot, l_dc_um);
    }
    return CouplerModel(lambda_um, dneff);
}

/// Linearized design-model index split of the fabricated coupler geometry.
inline double design_delta_neff(double lambda_um) {
    return 0.0451807 + 0.176787 * (lambda_um - 1.5);
}

/// Design calibration table sampled across the accessible band.
inline CouplerModel design_coupler_model(double lambda_min_um = 1.40,
                                         double lambda_max_um = 1.66,
                                         int points = 27) {
    if (points < 3) throw std::invalid_argument("need at least 3 points");
    std::vector<double> l(points), d(points);
    for (int i = 0; i < points; ++i) {
        l[i] = lambda_min_um +
               (lambda_max_um - lambda_min_um) * double(i) / (points - 1);
        d[i] = design_delta_neff(l[i]);
    }
    return CouplerModel(l, d);
}

}  // namespace wavegraph
