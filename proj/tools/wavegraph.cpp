// Command-line front end for the wavegraph library.
//
// One subcommand per deliverable: validate, classical, spectrum, stats,
// length-spectrum, orbits, localize, coupler, ingest, neff. Every CSV
// artifact carries `#`-prefixed metadata (tool version, config hash, graph
// length checksum, seed); bodies are deterministic for a fixed config+seed.
//
// Exit codes: 0 ok, 1 usage/internal, 2 invalid graph, 3 solver resolution
// failure, 4 I/O failure.

#include <wavegraph/wavegraph.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace wg = wavegraph;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string output_dir = ".";
    bool no_timestamp = false;
    unsigned long long seed = 12345;
    std::string config_hash = "0";
};

std::string fnv_hash(const std::string& s) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> base_metadata(const Common& c,
                                       const std::string& subcommand) {
    std::vector<std::string> md;
    md.push_back("tool: wavegraph " + std::string(kVersion));
    md.push_back("subcommand: " + subcommand);
    md.push_back("config_hash: " + c.config_hash);
    md.push_back("seed: " + std::to_string(c.seed));
    if (!c.no_timestamp) {
        const auto now = std::chrono::system_clock::now();
        md.push_back("generated_at: " +
                     std::to_string(std::chrono::duration_cast<
                                        std::chrono::seconds>(
                                        now.time_since_epoch())
                                        .count()));
    }
    return md;
}

void write_table(const Common& c, const std::string& name, wg::CsvTable t) {
    std::filesystem::create_directories(c.output_dir);
    wg::write_csv((std::filesystem::path(c.output_dir) / name).string(), t);
}

wg::Graph load_graph_or_exit(const std::string& path) {
    try {
        return wg::load_graph(path);
    } catch (const std::exception& e) {
        std::cerr << "invalid graph: " << e.what() << "\n";
        std::exit(2);
    }
}

struct Window {
    double k_min = 0.0, k_max = 0.0;
};

Window resolve_window(double kmin, double kmax, double lam_lo, double lam_hi) {
    Window w;
    if (lam_lo > 0.0 && lam_hi > 0.0) {
        w.k_min = 2.0 * std::numbers::pi / std::max(lam_lo, lam_hi);
        w.k_max = 2.0 * std::numbers::pi / std::min(lam_lo, lam_hi);
    } else {
        w.k_min = kmin;
        w.k_max = kmax;
    }
    if (!(w.k_max > w.k_min && w.k_min > 0.0)) {
        std::cerr << "empty solve window; use --kmin/--kmax or "
                     "--lambda-window lo hi\n";
        std::exit(1);
    }
    return w;
}

// Expands `--config file.json` into argv tokens so JSON configs and flags
// share one code path. Keys map to long option names of the subcommand.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--config") continue;
        if (i + 1 >= args.size()) break;
        std::ifstream in(args[i + 1]);
        if (!in) {
            std::cerr << "cannot open config: " << args[i + 1] << "\n";
            std::exit(4);
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            std::cerr << "bad config JSON: " << e.what() << "\n";
            std::exit(4);
        }
        std::vector<std::string> extra;
        for (const auto& [key, val] : j.items()) {
            extra.push_back("--" + key);
            if (val.is_boolean()) {
                if (!val.get<bool>()) extra.pop_back();
            } else if (val.is_string()) {
                extra.push_back(val.get<std::string>());
            } else if (val.is_array()) {
                for (const auto& v : val) extra.push_back(v.dump());
            } else {
                extra.push_back(val.dump());
            }
        }
        args.erase(args.begin() + i, args.begin() + i + 2);
        args.insert(args.begin() + i, extra.begin(), extra.end());
        break;
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("WAVEGRAPH_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"wavegraph: metric wave-graph spectra, statistics and "
                 "photonic-network analysis"};
    app.require_subcommand(1);

    Common common;
    std::string graph_path, input_path, reference_path;
    double kmin = 0.0, kmax = 0.0;
    std::vector<double> lambda_window;
    double bus = 0.2;
    int io_bond = -1;
    int grid_per_spacing = 10;
    bool open_mode = false, closed_mode = false, dispersive = false;
    int calibrate_count = 0;
    double max_orbit_length = 800.0;
    std::string synthetic;
    int synth_count = 10000;
    double l_dc = 8.3;
    std::string coupler_table;
    double r0 = 0.0, r0_err = 0.0, lambda_at = 1.5305;
    bool thg = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", common.output_dir,
                        "Output directory for CSV artifacts");
        sub->add_flag("--no-timestamp", common.no_timestamp,
                      "Omit the timestamp metadata line");
        sub->add_option("--seed", common.seed,
                        "Seed for synthetic generators");
        sub->add_option("--config", "JSON config file (expanded to flags)")
            ->expected(1);
    };
    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--kmin", kmin, "Lower wavenumber, rad/um");
        sub->add_option("--kmax", kmax, "Upper wavenumber, rad/um");
        sub->add_option("--lambda-window", lambda_window,
                        "Wavelength window in um, two values")
            ->expected(2);
    };

    auto* c_validate = app.add_subcommand("validate", "Check a graph file");
    c_validate->add_option("--graph", graph_path)->required();
    add_common(c_validate);

    auto* c_classical =
        app.add_subcommand("classical", "Perron-Frobenius classification");
    c_classical->add_option("--graph", graph_path)->required();
    add_common(c_classical);

    auto* c_spectrum =
        app.add_subcommand("spectrum", "Closed roots or open poles");
    c_spectrum->add_option("--graph", graph_path)->required();
    c_spectrum->add_flag("--open", open_mode, "Solve the bus-coupled graph");
    c_spectrum->add_flag("--closed", closed_mode, "Solve the closed graph");
    c_spectrum->add_option("--bus", bus, "Bus coupling for --open");
    c_spectrum->add_option("--io-bond", io_bond,
                           "Bond index carrying the bus (default: file)");
    c_spectrum->add_option("--grid-per-spacing", grid_per_spacing,
                           "Scan points per mean spacing");
    c_spectrum->add_flag("--dispersive", dispersive,
                         "Use the linear-dispersion phase index");
    c_spectrum->add_option("--calibrate", calibrate_count,
                           "Calibrate n_eff so the Weyl count matches");
    add_window(c_spectrum);
    add_common(c_spectrum);

    auto* c_stats = app.add_subcommand(
        "stats", "NNSD, number variance and rigidity of a spectrum");
    c_stats->add_option("--input", input_path, "roots CSV from `spectrum`");
    c_stats->add_option("--from-graph", graph_path,
                        "Solve and analyse in one pass");
    c_stats->add_option("--grid-per-spacing", grid_per_spacing);
    c_stats->add_option("--calibrate", calibrate_count);
    c_stats->add_option("--synthetic", synthetic,
                        "Reference sample: poisson | goe");
    c_stats->add_option("--count", synth_count,
                        "Size of the synthetic sample");
    add_window(c_stats);
    add_common(c_stats);

    auto* c_length = app.add_subcommand(
        "length-spectrum", "FFT of the model transmission trace");
    c_length->add_option("--graph", graph_path);
    c_length->add_option("--input", input_path,
                         "Measured trace CSV (lambda_nm,transmission)");
    c_length->add_option("--bus", bus);
    c_length->add_option("--io-bond", io_bond);
    c_length->add_flag("--dispersive", dispersive);
    add_window(c_length);
    add_common(c_length);

    auto* c_orbits =
        app.add_subcommand("orbits", "Enumerate periodic orbits");
    c_orbits->add_option("--graph", graph_path)->required();
    c_orbits->add_option("--max-length", max_orbit_length,
                         "Geometric length cutoff, um");
    add_common(c_orbits);

    auto* c_localize = app.add_subcommand(
        "localize", "Eigenmode entropy and participation statistics");
    c_localize->add_option("--graph", graph_path)->required();
    c_localize->add_option("--grid-per-spacing", grid_per_spacing);
    c_localize->add_option("--calibrate", calibrate_count);
    c_localize->add_flag("--thg", thg,
                         "Treat input intensities as third-harmonic");
    add_window(c_localize);
    add_common(c_localize);

    auto* c_coupler =
        app.add_subcommand("coupler", "Directional-coupler design curves");
    c_coupler->add_option("--table", coupler_table,
                          "Calibration CSV (lambda_um,delta_neff); default "
                          "is the design model");
    c_coupler->add_option("--l-dc", l_dc, "Interaction length, um");
    add_common(c_coupler);

    auto* c_ingest = app.add_subcommand(
        "ingest", "Normalize a measured scan and fit its resonances");
    c_ingest->add_option("--input", input_path)->required();
    c_ingest->add_option("--reference", reference_path,
                         "Reference scan CSV");
    add_common(c_ingest);

    auto* c_neff = app.add_subcommand(
        "neff", "Effective index from an imaging fringe rate");
    c_neff->add_option("--r0", r0, "Fringe rate, 1/um")->required();
    c_neff->add_option("--r0-err", r0_err, "Fringe-rate uncertainty");
    c_neff->add_option("--lambda", lambda_at, "Wavelength, um");
    add_common(c_neff);

    const auto args = expand_config(argc, argv);
    {
        std::string joined;
        for (const auto& a : args) joined += a + "\x1f";
        common.config_hash = fnv_hash(joined);
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const wg::IndexModel model = dispersive
                                     ? wg::IndexModel::LinearDispersion
                                     : wg::IndexModel::ConstantNeff;
    try {
        // -------------------------------------------------------- validate
        if (*c_validate) {
            wg::Graph g = load_graph_or_exit(graph_path);
            const auto lengths = wg::bond_lengths(g);
            std::cout << "ok: " << g.vertices.size() << " vertices, "
                      << g.bonds.size() << " bonds, L_tot = "
                      << fmt(g.total_length()) << " um\n";
            if (!wg::lengths_incommensurate(lengths))
                std::cout << "warning: bond lengths are pairwise "
                             "commensurate (degenerate spectra likely)\n";
            return 0;
        }
        // -------------------------------------------------------- classical
        if (*c_classical) {
            wg::Graph g = load_graph_or_exit(graph_path);
            const auto cls = wg::classify(g);
            wg::CsvTable t;
            t.metadata = base_metadata(common, "classical");
            t.metadata.push_back("graph: " + graph_path);
            t.metadata.push_back("L_tot_um: " + fmt(g.total_length()));
            t.header = {"re", "im", "modulus"};
            for (const auto& ev : cls.eigenvalues)
                t.rows.push_back(
                    {fmt(ev.real()), fmt(ev.imag()), fmt(std::abs(ev))});
            write_table(common, "classical_eigenvalues.csv", t);
            std::cout << (cls.is_ergodic ? "ergodic" : "non-ergodic") << ", "
                      << (cls.is_mixing ? "mixing, gap " + fmt(cls.gap)
                                        : "non-mixing (" +
                                              std::to_string(
                                                  cls.unimodular_set.size()) +
                                              " unimodular eigenvalues)")
                      << "\n";
            return 0;
        }
        // -------------------------------------------------------- spectrum
        if (*c_spectrum) {
            wg::Graph g = load_graph_or_exit(graph_path);
            const Window w = resolve_window(
                kmin, kmax, lambda_window.size() == 2 ? lambda_window[0] : 0,
                lambda_window.size() == 2 ? lambda_window[1] : 0);
            if (calibrate_count > 0) {
                g.n_eff = wg::calibrate_index(calibrate_count,
                                              g.total_length(), w.k_min,
                                              w.k_max);
                std::cout << "calibrated n_eff = " << fmt(g.n_eff) << "\n";
            }
            wg::SecularScanOptions opt;
            opt.model = model;
            opt.grid_per_spacing = grid_per_spacing;
            const auto closed =
                wg::closed_spectrum(g, w.k_min, w.k_max, opt);
            if (open_mode && closed_mode) {
                std::cerr << "choose one of --open/--closed\n";
                return 1;
            }
            wg::CsvTable t;
            t.metadata = base_metadata(common, "spectrum");
            t.metadata.push_back("graph: " + graph_path);
            t.metadata.push_back("L_tot_um: " + fmt(g.total_length()));
            t.metadata.push_back("index: " + fmt(g.n_eff));
            t.metadata.push_back("k_min: " + fmt(w.k_min));
            t.metadata.push_back("k_max: " + fmt(w.k_max));
            if (!open_mode) {
                t.header = {"k_um_inv", "multiplicity", "residual"};
                for (const auto& r : closed.roots)
                    t.rows.push_back({fmt(r.k),
                                      std::to_string(r.multiplicity),
                                      fmt(r.residual)});
                write_table(common, "spectrum.csv", t);
                std::cout << "levels: " << closed.level_count()
                          << ", missing fraction vs Weyl: "
                          << fmt(wg::missing_fraction(
                                 closed.level_count(), g.n_eff,
                                 g.total_length(), w.k_min, w.k_max))
                          << "\n";
            } else {
                int iob = io_bond >= 0 ? io_bond : g.io_bond;
                if (iob < 0) iob = 0;
                const wg::OpenGraph og = wg::open_graph(g, iob, bus);
                const auto poles = wg::open_poles(og, closed, model);
                t.metadata.push_back("bus_coupling: " + fmt(bus));
                t.header = {"re_k", "im_k", "gamma", "closed_k"};
                for (const auto& p : poles)
                    t.rows.push_back({fmt(p.k.real()), fmt(p.k.imag()),
                                      fmt(p.gamma), fmt(p.closed_k)});
                write_table(common, "poles.csv", t);
                std::cout << "poles: " << poles.size() << "\n";
            }
            return 0;
        }
        // -------------------------------------------------------- stats
        if (*c_stats) {
            std::vector<double> unfolded;
            std::vector<std::string> md = base_metadata(common, "stats");
            if (!synthetic.empty()) {
                std::mt19937_64 rng(common.seed);
                if (synthetic == "poisson") {
                    unfolded = wg::poisson_levels(synth_count, rng);
                } else if (synthetic == "goe") {
                    const auto sp = wg::goe_spacings(synth_count, rng);
                    double acc = 0.0;
                    for (double s : sp) unfolded.push_back(acc += s);
                } else {
                    std::cerr << "unknown synthetic ensemble: " << synthetic
                              << "\n";
                    return 1;
                }
                md.push_back("synthetic: " + synthetic);
            } else if (!input_path.empty()) {
                const wg::CsvTable in = wg::read_csv(input_path);
                const auto ks = wg::csv_numeric_column(in, "k_um_inv");
                double index = 0.0, ltot = 0.0;
                for (const auto& m : in.metadata) {
                    std::istringstream ss(m);
                    std::string key;
                    ss >> key;
                    if (key == "index:") ss >> index;
                    if (key == "L_tot_um:") ss >> ltot;
                }
                if (index <= 0.0 || ltot <= 0.0) {
                    std::cerr << "input CSV lacks index/L_tot metadata\n";
                    return 4;
                }
                unfolded = wg::unfold(ks, index, ltot);
                md.push_back("input: " + input_path);
            } else if (!graph_path.empty()) {
                wg::Graph g = load_graph_or_exit(graph_path);
                const Window w = resolve_window(
                    kmin, kmax,
                    lambda_window.size() == 2 ? lambda_window[0] : 0,
                    lambda_window.size() == 2 ? lambda_window[1] : 0);
                if (calibrate_count > 0)
                    g.n_eff = wg::calibrate_index(calibrate_count,
                                                  g.total_length(), w.k_min,
                                                  w.k_max);
                wg::SecularScanOptions opt;
                opt.model = model;
                opt.grid_per_spacing = grid_per_spacing;
                const auto spec =
                    wg::closed_spectrum(g, w.k_min, w.k_max, opt);
                unfolded = wg::unfold(spec.levels(), g.n_eff,
                                      g.total_length());
                md.push_back("graph: " + graph_path);
                md.push_back("index: " + fmt(g.n_eff));
            } else {
                std::cerr << "stats needs --input, --from-graph or "
                             "--synthetic\n";
                return 1;
            }

            const auto sp = wg::spacings(unfolded);
            const wg::Nnsd nn = wg::nnsd(sp);
            std::cout << "levels: " << unfolded.size()
                      << "  KS(GOE) = " << fmt(nn.ks_goe)
                      << "  KS(GUE) = " << fmt(nn.ks_gue)
                      << "  KS(Poisson) = " << fmt(nn.ks_poisson) << "\n";

            wg::CsvTable tn;
            tn.metadata = md;
            tn.metadata.push_back("ks_goe: " + fmt(nn.ks_goe));
            tn.metadata.push_back("ks_gue: " + fmt(nn.ks_gue));
            tn.metadata.push_back("ks_poisson: " + fmt(nn.ks_poisson));
            if (nn.cdf_only) tn.metadata.push_back("cdf_only: true");
            tn.header = {"s", "P_emp", "P_GOE", "P_GUE", "P_Poisson"};
            if (!nn.cdf_only) {
                for (std::size_t b = 0; b + 1 < nn.bin_edges.size(); ++b) {
                    const double s =
                        0.5 * (nn.bin_edges[b] + nn.bin_edges[b + 1]);
                    tn.rows.push_back(
                        {fmt(s), fmt(nn.density[b]),
                         fmt(wg::nnsd_pdf(wg::Ensemble::GOE, s)),
                         fmt(wg::nnsd_pdf(wg::Ensemble::GUE, s)),
                         fmt(wg::nnsd_pdf(wg::Ensemble::Poisson, s))});
                }
            }
            write_table(common, "nnsd.csv", tn);

            wg::CsvTable tr;
            tr.metadata = md;
            tr.header = {"L",         "sigma2",     "delta3",
                         "sigma2_goe", "sigma2_poisson", "delta3_goe",
                         "delta3_poisson"};
            for (double L = 1.0; L <= 10.0 + 1e-9; L += 0.5) {
                const auto s2 = wg::number_variance(unfolded, L);
                const auto d3 = wg::rigidity_delta3(unfolded, L);
                tr.rows.push_back(
                    {fmt(L), fmt(s2.value), fmt(d3.value),
                     fmt(wg::sigma2_reference(wg::Ensemble::GOE, L)),
                     fmt(wg::sigma2_reference(wg::Ensemble::Poisson, L)),
                     fmt(wg::delta3_reference(wg::Ensemble::GOE, L)),
                     fmt(wg::delta3_reference(wg::Ensemble::Poisson, L))});
            }
            write_table(common, "rigidity.csv", tr);
            return 0;
        }
        // ---------------------------------------------------- length-spectrum
        if (*c_length) {
            wg::Trace trace;
            std::vector<std::string> md =
                base_metadata(common, "length-spectrum");
            wg::Graph g;
            bool have_graph = false;
            if (!graph_path.empty()) {
                g = load_graph_or_exit(graph_path);
                have_graph = true;
                const Window w = resolve_window(
                    kmin, kmax,
                    lambda_window.size() == 2 ? lambda_window[0] : 0,
                    lambda_window.size() == 2 ? lambda_window[1] : 0);
                int iob = io_bond >= 0 ? io_bond : g.io_bond;
                if (iob < 0) iob = 0;
                const wg::OpenGraph og = wg::open_graph(g, iob, bus);
                const std::size_t n = 8192;
                trace.k.resize(n);
                trace.value.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    trace.k[i] = w.k_min + (w.k_max - w.k_min) *
                                               double(i) / double(n - 1);
                    trace.value[i] =
                        std::norm(wg::transmission(og, trace.k[i], model).t);
                }
                md.push_back("graph: " + graph_path);
                md.push_back("bus_coupling: " + fmt(bus));
            } else if (!input_path.empty()) {
                const wg::CsvTable in = wg::read_csv(input_path);
                auto lam = wg::csv_numeric_column(in, "lambda_nm");
                for (double& l : lam) l *= 1e-3;
                trace = wg::resample_uniform_k(
                    lam, wg::csv_numeric_column(in, "transmission"));
                md.push_back("input: " + input_path);
            } else {
                std::cerr << "length-spectrum needs --graph or --input\n";
                return 1;
            }
            const auto ls = wg::length_spectrum(trace);
            const auto peaks = wg::find_length_peaks(ls);
            wg::CsvTable t;
            t.metadata = md;
            t.metadata.push_back("bin_um: " + fmt(ls.bin_um));
            t.header = {"ell_um", "magnitude"};
            for (std::size_t i = 0; i < ls.ell.size(); ++i)
                t.rows.push_back({fmt(ls.ell[i]), fmt(ls.magnitude[i])});
            write_table(common, "length_spectrum.csv", t);

            wg::CsvTable tp;
            tp.metadata = md;
            tp.header = {"ell_um", "magnitude", "matched_orbits"};
            std::vector<wg::PeakMatch> matches;
            if (have_graph) {
                const auto orbits = wg::enumerate_orbits(
                    g, wg::assemble_sigma(g),
                    (peaks.empty() ? 1000.0
                                   : peaks.front().ell_um / g.n_g) +
                        200.0);
                matches = wg::match_peaks(peaks, orbits, g.n_g, ls.bin_um);
            }
            for (std::size_t i = 0; i < peaks.size(); ++i)
                tp.rows.push_back(
                    {fmt(peaks[i].ell_um), fmt(peaks[i].magnitude),
                     std::to_string(
                         have_graph ? matches[i].orbits.size() : 0)});
            write_table(common, "length_peaks.csv", tp);
            std::cout << "peaks above 0.05: " << peaks.size()
                      << ", bin " << fmt(ls.bin_um) << " um\n";
            return 0;
        }
        // -------------------------------------------------------- orbits
        if (*c_orbits) {
            wg::Graph g = load_graph_or_exit(graph_path);
            const auto orbits = wg::enumerate_orbits(
                g, wg::assemble_sigma(g), max_orbit_length);
            wg::CsvTable t;
            t.metadata = base_metadata(common, "orbits");
            t.metadata.push_back("graph: " + graph_path);
            t.metadata.push_back("max_length_um: " + fmt(max_orbit_length));
            t.header = {"length_um", "optical_length_um", "weight",
                        "repetition", "directed_bonds"};
            for (const auto& o : orbits) {
                std::string seq;
                for (int d : o.directed_bonds)
                    seq += (seq.empty() ? "" : " ") + std::to_string(d);
                t.rows.push_back({fmt(o.length_um),
                                  fmt(g.n_g * o.length_um), fmt(o.weight),
                                  std::to_string(o.repetition), seq});
            }
            write_table(common, "orbits.csv", t);
            std::cout << orbits.size() << " orbits up to "
                      << fmt(max_orbit_length) << " um\n";
            return 0;
        }
        // -------------------------------------------------------- localize
        if (*c_localize) {
            wg::Graph g = load_graph_or_exit(graph_path);
            const Window w = resolve_window(
                kmin, kmax, lambda_window.size() == 2 ? lambda_window[0] : 0,
                lambda_window.size() == 2 ? lambda_window[1] : 0);
            if (calibrate_count > 0)
                g.n_eff = wg::calibrate_index(calibrate_count,
                                              g.total_length(), w.k_min,
                                              w.k_max);
            wg::SecularScanOptions opt;
            opt.model = model;
            opt.grid_per_spacing = grid_per_spacing;
            const auto spec = wg::closed_spectrum(g, w.k_min, w.k_max, opt);
            const auto ens = wg::ensemble_localization(
                g, wg::assemble_sigma(g), spec, model);
            wg::CsvTable t;
            t.metadata = base_metadata(common, "localize");
            t.metadata.push_back("graph: " + graph_path);
            t.metadata.push_back("mean_entropy_norm: " +
                                 fmt(ens.mean_entropy_norm));
            t.metadata.push_back("std_entropy_norm: " +
                                 fmt(ens.std_entropy_norm));
            t.header = {"k_um_inv", "entropy_norm", "ipr"};
            for (const auto& m : ens.per_mode)
                t.rows.push_back(
                    {fmt(m.k), fmt(m.entropy_norm), fmt(m.ipr)});
            write_table(common, "localization.csv", t);
            std::cout << "S_norm = " << fmt(ens.mean_entropy_norm) << " +- "
                      << fmt(ens.std_entropy_norm) << " over " << ens.modes
                      << " modes\n";
            return 0;
        }
        // -------------------------------------------------------- coupler
        if (*c_coupler) {
            std::optional<wg::CouplerModel> model_c;
            if (!coupler_table.empty()) {
                const wg::CsvTable in = wg::read_csv(coupler_table);
                model_c.emplace(wg::csv_numeric_column(in, "lambda_um"),
                                wg::csv_numeric_column(in, "delta_neff"));
            } else {
                model_c.emplace(wg::design_coupler_model());
            }
            wg::CsvTable t;
            t.metadata = base_metadata(common, "coupler");
            t.metadata.push_back("l_dc_um: " + fmt(l_dc));
            t.header = {"lambda_um", "delta_neff", "delta_ng", "l50_um",
                        "p_bar", "p_cross"};
            for (double lam = model_c->lambda_min() + 1e-3;
                 lam <= model_c->lambda_max() - 1e-3; lam += 0.005) {
                const auto s = wg::splitting(*model_c, lam, l_dc);
                t.rows.push_back({fmt(lam), fmt(model_c->delta_neff(lam)),
                                  fmt(model_c->delta_ng(lam)),
                                  fmt(wg::l50(*model_c, lam)), fmt(s.p_bar),
                                  fmt(s.p_cross)});
            }
            write_table(common, "coupler.csv", t);
            std::cout << "l50(1.5 um) = " << fmt(wg::l50(*model_c, 1.5))
                      << " um, delta_ng(1.5 um) = "
                      << fmt(model_c->delta_ng(1.5)) << "\n";
            return 0;
        }
        // -------------------------------------------------------- ingest
        if (*c_ingest) {
            const wg::CsvTable in = wg::read_csv(input_path);
            auto lam = wg::csv_numeric_column(in, "lambda_nm");
            auto raw = wg::csv_numeric_column(in, "transmission");
            std::vector<double> ref(raw.size(), 1.0);
            if (!reference_path.empty()) {
                const wg::CsvTable rt = wg::read_csv(reference_path);
                ref = wg::csv_numeric_column(rt, "transmission");
            }
            for (double& l : lam) l *= 1e-3;  // nm -> um
            const auto spec = wg::normalize_spectrum(lam, raw, ref);
            if (spec.clipped_points > 0)
                std::cout << "clipped " << spec.clipped_points
                          << " points above 1.2\n";
            const auto dips = wg::find_dips(spec);
            std::vector<wg::LorentzianFit> fits;
            wg::CsvTable t;
            t.metadata = base_metadata(common, "ingest");
            t.metadata.push_back("input: " + input_path);
            t.header = {"lambda_nm", "k_um_inv", "fwhm_nm", "Q", "depth",
                        "undersampled"};
            for (const auto& d : dips) {
                const auto f = wg::fit_lorentzian(spec, d);
                t.rows.push_back({fmt(f.lambda0_um * 1e3), fmt(f.k0),
                                  fmt(f.fwhm_lambda_um * 1e3), fmt(f.q),
                                  fmt(f.depth),
                                  f.undersampled ? "1" : "0"});
                if (!f.undersampled) fits.push_back(f);
            }
            write_table(common, "dips.csv", t);
            std::cout << dips.size() << " dips";
            if (fits.size() >= 2) {
                const auto fe = wg::finesse(fits);
                std::cout << ", finesse " << fmt(fe.finesse);
            }
            std::cout << "\n";
            return 0;
        }
        // -------------------------------------------------------- neff
        if (*c_neff) {
            const auto est = wg::neff_from_fringe(r0, r0_err, lambda_at);
            std::cout << "n_eff = " << fmt(est.value) << " +- "
                      << fmt(est.uncertainty) << "\n";
            return 0;
        }
    } catch (const wg::ResolutionError& e) {
        std::cerr << "solver resolution failure: " << e.what()
                  << " (suggested dk " << fmt(e.suggested_dk) << ")\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        if (msg.find("cannot open") != std::string::npos ||
            msg.find("CSV") != std::string::npos ||
            msg.find("write failed") != std::string::npos) {
            std::cerr << "I/O error: " << msg << "\n";
            return 4;
        }
        std::cerr << "error: " << msg << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
