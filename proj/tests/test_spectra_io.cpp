#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <wavegraph/spectra_io.hpp>

using namespace wavegraph;

namespace {

/// Synthetic scan with Lorentzian dips at the given centers (in k), all with
/// full width gamma_k and the given depth, sampled on a uniform wavelength
/// grid.
NormalizedSpectrum lorentzian_scan(const std::vector<double>& k_centers,
                                   double gamma_k, double depth,
                                   double lam_lo, double lam_hi, int n) {
    NormalizedSpectrum s;
    for (int i = 0; i < n; ++i) {
        const double lam = lam_lo + (lam_hi - lam_lo) * i / double(n - 1);
        const double k = 2.0 * std::numbers::pi / lam;
        double t = 1.0;
        for (double k0 : k_centers) {
            const double hw = 0.5 * gamma_k;
            t -= depth * hw * hw / ((k - k0) * (k - k0) + hw * hw);
        }
        s.lambda_um.push_back(lam);
        s.transmission.push_back(t);
    }
    return s;
}

}  // namespace

TEST_CASE("normalization clips drift artefacts and rejects bad references") {
    const std::vector<double> lam{1.50, 1.51, 1.52, 1.53};
    const std::vector<double> raw{0.5, 1.3, 0.2, 0.9};
    const std::vector<double> ref{1.0, 1.0, 1.0, 1.0};
    const auto s = normalize_spectrum(lam, raw, ref);
    CHECK(s.clipped_points == 1);
    CHECK(s.transmission[1] == doctest::Approx(1.2));
    CHECK(s.transmission[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(normalize_spectrum(lam, raw, {1.0, 0.0, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(normalize_spectrum({1.5, 1.4, 1.3, 1.2}, raw, ref),
                    std::invalid_argument);
    CHECK_THROWS_AS(normalize_spectrum({1.5}, {1.0}, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("dip detection finds isolated resonances") {
    const double k0 = 2.0 * std::numbers::pi / 1.55;
    const auto s = lorentzian_scan({k0}, 2e-4, 0.8, 1.549, 1.551, 2001);
    const auto dips = find_dips(s);
    REQUIRE(dips.size() == 1);
    CHECK(dips[0].lambda_um == doctest::Approx(1.55).epsilon(1e-4));
    CHECK(dips[0].depth == doctest::Approx(0.8).epsilon(0.02));
    // shallow ripples below the depth threshold are ignored
    const auto faint = lorentzian_scan({k0}, 2e-4, 0.05, 1.549, 1.551, 2001);
    CHECK(find_dips(faint).empty());
}

TEST_CASE("Lorentzian fit recovers a high-Q resonance") {
    // Q = 2e5 at 1.55 um: FWHM(lambda) = 7.75e-6 um
    const double lam0 = 1.55;
    const double k0 = 2.0 * std::numbers::pi / lam0;
    const double gamma_k = k0 / 2e5;
    const auto s =
        lorentzian_scan({k0}, gamma_k, 0.7, lam0 - 1.2e-4, lam0 + 1.2e-4, 1200);
    const auto dips = find_dips(s);
    REQUIRE(dips.size() == 1);
    const auto fit = fit_lorentzian(s, dips[0]);
    CHECK(fit.converged);
    CHECK_FALSE(fit.undersampled);
    CHECK(fit.q == doctest::Approx(2e5).epsilon(0.001));
    CHECK(fit.lambda0_um == doctest::Approx(lam0).epsilon(1e-7));
    CHECK(fit.gamma_k == doctest::Approx(gamma_k).epsilon(0.001));
    CHECK(fit.depth == doctest::Approx(0.7).epsilon(0.01));
    CHECK(fit.rms_residual <= 1e-6);
}

TEST_CASE("coarsely sampled resonances are flagged undersampled") {
    const double lam0 = 1.55;
    const double k0 = 2.0 * std::numbers::pi / lam0;
    const double gamma_k = k0 / 2e5;
    // ~2 samples per FWHM
    const auto s =
        lorentzian_scan({k0}, gamma_k, 0.7, lam0 - 2e-4, lam0 + 2e-4, 100);
    const auto dips = find_dips(s);
    REQUIRE(dips.size() >= 1);
    const auto fit = fit_lorentzian(s, dips[0]);
    CHECK(fit.undersampled);
}

TEST_CASE("finesse of an evenly spaced comb") {
    // five dips, FSR / FWHM = 5
    const double lam0 = 1.55;
    const double k0 = 2.0 * std::numbers::pi / lam0;
    const double fsr_k = 5e-3;
    const double gamma_k = fsr_k / 5.0;
    std::vector<double> centers;
    for (int i = -2; i <= 2; ++i) centers.push_back(k0 + i * fsr_k);
    const auto s = lorentzian_scan(centers, gamma_k, 0.8, 1.5450, 1.5550, 40001);
    const auto dips = find_dips(s);
    REQUIRE(dips.size() == 5);
    std::vector<LorentzianFit> fits;
    for (const auto& d : dips) fits.push_back(fit_lorentzian(s, d));
    const auto est = finesse(fits);
    CHECK(est.resonances == 5);
    CHECK(est.finesse == doctest::Approx(5.0).epsilon(0.05));
    CHECK_THROWS_AS(finesse({fits[0]}), std::invalid_argument);
}

TEST_CASE("effective index from the interferometric fringe rate") {
    // fringe rate r0 in fringes per um of path difference: n_eff = r0 l / 2
    const auto plain = neff_from_fringe(2.0 / 1.5, 0.0, 1.5);
    CHECK(plain.value == doctest::Approx(1.0));
    const auto est = neff_from_fringe(3.141, 0.018, 1.5305);
    CHECK(est.value == doctest::Approx(2.404).epsilon(1e-3));
    CHECK(est.uncertainty == doctest::Approx(0.014).epsilon(0.02));
    // doubling the fringe rate doubles the index
    const auto twice = neff_from_fringe(2.0 * 3.141, 0.0, 1.5305);
    CHECK(twice.value == doctest::Approx(2.0 * est.value).epsilon(1e-12));
    CHECK_THROWS_AS(neff_from_fringe(0.0, 0.0, 1.5), std::invalid_argument);
}
