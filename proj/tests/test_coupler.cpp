#include <doctest.h>

#include <wavegraph/coupler.hpp>

using namespace wavegraph;

TEST_CASE("design model reproduces the fabricated coupler figures") {
    const CouplerModel m = design_coupler_model();
    CHECK(l50(m, 1.5) == doctest::Approx(8.3).epsilon(1e-3));
    CHECK(m.delta_ng(1.5) == doctest::Approx(-0.22).epsilon(1e-2));
    CHECK_FALSE(delta_ng_near_zero(m.delta_ng(1.5)));
}

TEST_CASE("power splitting is an exact complement") {
    const CouplerModel m = design_coupler_model();
    for (double lam : {1.45, 1.5, 1.55, 1.6}) {
        for (double l : {2.0, 8.3, 15.0, 30.0}) {
            const Splitting s = splitting(m, lam, l);
            CHECK(s.p_bar + s.p_cross == 1.0);  // exact, not approximate
            CHECK(s.p_bar >= 0.0);
            CHECK(s.p_cross >= 0.0);
        }
    }
    // zero-length coupler transmits everything on the bar port
    const Splitting s0 = splitting(m, 1.5, 0.0);
    CHECK(s0.p_bar == doctest::Approx(1.0));
    // the 50:50 length splits evenly by construction
    const Splitting s50 = splitting(m, 1.5, l50(m, 1.5));
    CHECK(s50.p_bar == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(splitting(m, 1.5, -1.0), std::invalid_argument);
}

TEST_CASE("model construction validation") {
    CHECK_THROWS_AS(CouplerModel({1.5, 1.6}, {0.04, 0.05}),
                    std::invalid_argument);
    const CouplerModel m({1.45, 1.5, 1.55}, {0.04, 0.045, 0.05});
    CHECK(m.lambda_min() == doctest::Approx(1.45));
    CHECK(m.lambda_max() == doctest::Approx(1.55));
    CHECK(m.in_band(1.5));
    CHECK_FALSE(m.in_band(1.6));
    // 1% guard band beyond the calibration range, then an error
    CHECK_NOTHROW(m.delta_neff(1.5505));
    CHECK_THROWS_AS(m.delta_neff(1.6), std::domain_error);
    CHECK_THROWS_AS(m.delta_neff(1.2), std::domain_error);
}

TEST_CASE("splitting ratio inversion round trip") {
    const CouplerModel m = design_coupler_model();
    for (double lam : {1.48, 1.52, 1.58}) {
        // choose l short enough to stay on the principal branch
        const double l = 0.8 * l50(m, lam);
        const Splitting s = splitting(m, lam, l);
        const double back = dneff_from_splitting(lam, s.p_cross, l);
        CHECK(back == doctest::Approx(m.delta_neff(lam)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(dneff_from_splitting(1.5, 1.5, 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(dneff_from_splitting(1.5, 0.5, 0.0),
                    std::invalid_argument);
}

TEST_CASE("model from raw bar/cross powers") {
    // synthesize powers from the design model, then rebuild it
    const CouplerModel ref = design_coupler_model();
    const double l_dc = 5.0;
    std::vector<double> lam, p13, p14;
    for (int i = 0; i < 21; ++i) {
        const double l = 1.45 + 0.15 * i / 20.0;
        const Splitting s = splitting(ref, l, l_dc);
        lam.push_back(l);
        p13.push_back(0.9 * s.p_bar);  // common scale drops out of the ratio
        p14.push_back(0.9 * s.p_cross);
    }
    const CouplerModel rebuilt = coupler_model_from_powers(lam, p13, p14, l_dc);
    for (double l : {1.46, 1.5, 1.55, 1.59})
        CHECK(rebuilt.delta_neff(l) ==
              doctest::Approx(ref.delta_neff(l)).epsilon(1e-4));
    CHECK_THROWS_AS(coupler_model_from_powers({1.5}, {0.5}, {0.5, 0.5}, 5.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        coupler_model_from_powers({1.5, 1.6, 1.7}, {0, 0.5, 0.5},
                                  {0, 0.5, 0.5}, 5.0),
        std::invalid_argument);
}

TEST_CASE("group index split sign and magnitude") {
    // dng = dneff - lambda d(dneff)/dlambda; for the linear design table the
    // derivative term dominates and the split is negative
    const CouplerModel m = design_coupler_model();
    const double expected =
        design_delta_neff(1.52) - 1.52 * 0.176787;
    CHECK(m.delta_ng(1.52) == doctest::Approx(expected).epsilon(1e-3));
    CHECK(delta_ng_near_zero(0.01));
    CHECK_FALSE(delta_ng_near_zero(-0.22));
}

TEST_CASE("l50 requires a positive index split") {
    const CouplerModel m({1.4, 1.5, 1.6}, {-0.01, 0.0, 0.01});
    CHECK_THROWS_AS(l50(m, 1.45), std::domain_error);
}
