// Opens the bundled bow-tie graph to a two-lead bus, scans the transmission
// over 1480-1600 nm with the dispersive index model, Fourier-transforms the
// trace into a length spectrum and matches its peaks against enumerated
// periodic orbits.

#include <cstdio>
#include <numbers>
#include <string>

#include <wavegraph/wavegraph.hpp>

int main() {
    using namespace wavegraph;

    const Graph g = load_graph(std::string(WAVEGRAPH_DATA_DIR) + "/btg.json");
    const OpenGraph og = open_graph(g, g.io_bond, 0.15);

    const std::size_t n = 16384;
    const double k_min = 2.0 * std::numbers::pi / 1.600;
    const double k_max = 2.0 * std::numbers::pi / 1.480;
    Trace tr;
    tr.k.resize(n);
    tr.value.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tr.k[i] = k_min + (k_max - k_min) * double(i) / double(n - 1);
        tr.value[i] =
            std::norm(transmission(og, tr.k[i], IndexModel::LinearDispersion).t);
    }

    const auto ls = length_spectrum(tr);
    std::printf("FFT bin %.2f um, Parseval defect %.1e\n", ls.bin_um,
                ls.parseval_defect);

    const auto orbits = enumerate_orbits(g, assemble_sigma(g), 2000.0);
    std::printf("%zu periodic orbits up to 2000 um geometric length\n",
                orbits.size());

    const auto peaks = find_length_peaks(ls, 0.1);
    const auto matches = match_peaks(peaks, orbits, g.n_g, ls.bin_um);
    std::printf("%zu peaks above 0.1 normalized magnitude:\n", peaks.size());
    for (std::size_t i = 0; i < matches.size() && i < 12; ++i) {
        const auto& m = matches[i];
        std::printf("  %8.1f um  mag %.3f  %s", m.peak.ell_um,
                    m.peak.magnitude,
                    m.orbits.empty() ? "(no orbit in range)" : "orbits:");
        for (std::size_t j = 0; j < m.orbits.size() && j < 3; ++j)
            std::printf(" %.2f um x%d", m.orbits[j].length_um,
                        m.orbits[j].repetition);
        std::printf("\n");
    }
    return 0;
}
