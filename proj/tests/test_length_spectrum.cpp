#include <doctest.h>

#include <wavegraph/evolution.hpp>
#include <wavegraph/length_spectrum.hpp>

using namespace wavegraph;

namespace {

Graph data_graph(const char* name) {
    return load_graph(std::string(WAVEGRAPH_DATA_DIR) + "/" + name);
}

Graph ring_graph(double len1, double len2, double n_eff) {
    Graph g;
    g.vertices.push_back({0, VertexKind::Passthrough, 0, 1.0, {}, {0, 1}});
    g.vertices.push_back({1, VertexKind::Passthrough, 0, 1.0, {}, {2, 3}});
    g.bonds.push_back({0, 2, len1});
    g.bonds.push_back({3, 1, len2});
    g.n_eff = n_eff;
    g.n_g = n_eff;
    return g;
}

Trace cosine_trace(double ell_um, std::size_t n = 8192,
                   double k0 = 4.0, double k1 = 4.3) {
    Trace tr;
    tr.k.resize(n);
    tr.value.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tr.k[i] = k0 + (k1 - k0) * double(i) / double(n - 1);
        tr.value[i] = 1.0 + 0.5 * std::cos(tr.k[i] * ell_um);
    }
    return tr;
}

}  // namespace

TEST_CASE("wavelength resampling round trip") {
    // sample a smooth trace on a non-uniform wavelength grid, shuffled
    std::vector<double> lam, val;
    for (int i = 0; i < 3000; ++i) {
        const double l = 1.48 + 0.12 * (i + (i % 7) * 0.1) / 3000.0;
        lam.push_back(l);
        val.push_back(std::sin(40.0 * l));
    }
    std::swap(lam[10], lam[2000]);
    std::swap(val[10], val[2000]);
    const Trace tr = resample_uniform_k(lam, val, 4096);
    CHECK(tr.k.size() == 4096);
    CHECK(std::is_sorted(tr.k.begin(), tr.k.end()));
    // spacing is uniform to machine accuracy
    const double dk = tr.k[1] - tr.k[0];
    for (std::size_t i = 2; i < tr.k.size(); i += 511)
        CHECK(tr.k[i] - tr.k[i - 1] == doctest::Approx(dk).epsilon(1e-9));
    // endpoints map to the wavelength extremes
    CHECK(tr.k.front() ==
          doctest::Approx(2.0 * std::numbers::pi / 1.6).epsilon(1e-3));
    // interior values agree with the sampled function
    for (std::size_t i = 100; i < tr.k.size() - 100; i += 377) {
        const double l = 2.0 * std::numbers::pi / tr.k[i];
        CHECK(tr.value[i] == doctest::Approx(std::sin(40.0 * l)).epsilon(1e-5));
    }
}

TEST_CASE("resampling input validation") {
    CHECK_THROWS_AS(resample_uniform_k({1.5, 1.6}, {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resample_uniform_k({1.5, -1.6, 1.7}, {0, 1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resample_uniform_k({1.5, 1.5, 1.7}, {0, 1, 2}),
                    std::invalid_argument);
}

TEST_CASE("single-cosine trace gives a single peak at its length") {
    const double ell = 1234.5;
    const auto ls = length_spectrum(cosine_trace(ell));
    const auto peaks = find_length_peaks(ls, 0.5);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].ell_um - ell) <= ls.bin_um);
    CHECK(peaks[0].magnitude == doctest::Approx(1.0));
    CHECK(ls.parseval_defect <= 1e-6);
}

TEST_CASE("peak location is window- and offset-independent") {
    const double ell = 800.0;
    Trace tr = cosine_trace(ell);
    const auto hann = length_spectrum(tr, Window::Hann);
    const auto rect = length_spectrum(tr, Window::Rectangular);
    const auto p1 = find_length_peaks(hann, 0.5);
    const auto p2 = find_length_peaks(rect, 0.5);
    REQUIRE(p1.size() >= 1);
    REQUIRE(p2.size() >= 1);
    CHECK(std::abs(p1[0].ell_um - p2[0].ell_um) <= hann.bin_um);
    // a constant offset only feeds the (excluded) DC bin
    for (double& v : tr.value) v += 5.0;
    const auto p3 = find_length_peaks(length_spectrum(tr), 0.5);
    REQUIRE(p3.size() >= 1);
    CHECK(p3[0].ell_um == doctest::Approx(p1[0].ell_um));
}

TEST_CASE("two-cosine trace resolves both lengths, strongest first") {
    Trace tr = cosine_trace(900.0);
    for (std::size_t i = 0; i < tr.k.size(); ++i)
        tr.value[i] += 0.25 * std::cos(tr.k[i] * 2100.0);
    const auto ls = length_spectrum(tr);
    const auto peaks = find_length_peaks(ls, 0.3);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].ell_um - 900.0) <= ls.bin_um);
    CHECK(std::abs(peaks[1].ell_um - 2100.0) <= ls.bin_um);
    CHECK(peaks[0].magnitude > peaks[1].magnitude);
}

TEST_CASE("length_spectrum input validation") {
    Trace tr = cosine_trace(100.0, 4096);
    tr.k.resize(100);
    tr.value.resize(100);
    CHECK_THROWS_AS(length_spectrum(tr), std::invalid_argument);
    Trace odd = cosine_trace(100.0, 5000);
    CHECK_THROWS_AS(length_spectrum(odd), std::invalid_argument);
}

TEST_CASE("ring orbits: two directions, then repetitions") {
    const Graph ring = ring_graph(64.0, 36.0, 2.0);
    const auto orbits = enumerate_orbits(ring, assemble_sigma(ring), 350.0);
    // circumference 100: primitive cw + ccw at 100, repetitions at 200, 300
    std::vector<double> lengths;
    for (const auto& o : orbits) lengths.push_back(o.length_um);
    REQUIRE(orbits.size() == 6);
    CHECK(lengths == std::vector<double>{100, 100, 200, 200, 300, 300});
    CHECK(orbits[0].repetition == 1);
    CHECK(orbits[2].repetition == 2);
    CHECK(orbits[4].repetition == 3);
    for (const auto& o : orbits)
        CHECK(o.weight == doctest::Approx(1.0));  // passthroughs are lossless
}

TEST_CASE("every orbit has a time-reversed partner of equal length") {
    const Graph btg = data_graph("btg.json");
    const auto orbits = enumerate_orbits(btg, assemble_sigma(btg), 900.0);
    REQUIRE(orbits.size() > 10);
    auto canonical = [](std::vector<int> seq) {
        std::vector<int> best = seq;
        for (std::size_t s = 1; s < seq.size(); ++s) {
            std::rotate(seq.begin(), seq.begin() + 1, seq.end());
            if (seq < best) best = seq;
        }
        return best;
    };
    for (const auto& o : orbits) {
        std::vector<int> rev(o.directed_bonds.rbegin(),
                             o.directed_bonds.rend());
        for (int& d : rev) d ^= 1;  // flip every direction
        const auto target = canonical(rev);
        bool found = false;
        for (const auto& p : orbits)
            if (p.directed_bonds == target) {
                found = true;
                CHECK(p.length_um == doctest::Approx(o.length_um));
                CHECK(p.weight == doctest::Approx(o.weight));
            }
        CHECK(found);
    }
}

TEST_CASE("bow-tie short cycles appear at their designed lengths") {
    const Graph btg = data_graph("btg.json");
    const auto orbits = enumerate_orbits(btg, assemble_sigma(btg), 900.0);
    auto has_length = [&](double L) {
        for (const auto& o : orbits)
            if (std::abs(o.length_um - L) < 1e-6) return true;
        return false;
    };
    CHECK(has_length(403.02));  // short bus loop e0 + e2
    CHECK(has_length(806.04));  // long bus loop e1 + e2 = 2x the short one
}

TEST_CASE("orbit enumeration budget is enforced") {
    const Graph btg = data_graph("btg.json");
    const Matrix sigma = assemble_sigma(btg);
    CHECK_THROWS_AS(enumerate_orbits(btg, sigma, 2000.0, 1000),
                    std::runtime_error);
    CHECK_THROWS_AS(enumerate_orbits(btg, sigma, -5.0), std::domain_error);
}

TEST_CASE("match_peaks pairs peaks with orbits inside the tolerance") {
    const Graph ring = ring_graph(64.0, 36.0, 2.0);
    const auto orbits = enumerate_orbits(ring, assemble_sigma(ring), 350.0);
    std::vector<SpectrumPeak> peaks{{200.5, 1.0}, {577.0, 0.3}};
    const auto matches = match_peaks(peaks, orbits, 2.0, 5.0);
    REQUIRE(matches.size() == 2);
    CHECK(matches[0].orbits.size() == 2);  // cw and ccw primitive at 2*100
    CHECK(matches[1].orbits.empty());
}
