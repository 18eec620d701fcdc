#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wavegraph/evolution.hpp"
#include "wavegraph/graph.hpp"

namespace wavegraph {

/// Smooth counting function N_Weyl(k) = n_g L_tot k / pi.
inline double weyl_count(const Graph& g, double k) {
    if (k < 0.0) throw std::domain_error("k must be nonnegative");
    return g.n_g * g.total_length() * k / std::numbers::pi;
}

/// Weyl count with an explicit (e.g. calibrated) index.
inline double weyl_count(double index, double total_length, double k) {
    return index * total_length * k / std::numbers::pi;
}

struct ClosedRoot {
    double k = 0.0;
    double residual = 0.0;
    int multiplicity = 1;
};

struct ResonanceSet {
    std::vector<ClosedRoot> roots;  // sorted ascending in k

    int level_count() const {
        int n = 0;
        for (const auto& r : roots) n += r.multiplicity;
        return n;
    }
    std::vector<double> levels() const {
        std::vector<double> ks;
        for (const auto& r : roots)
            for (int m = 0; m < r.multiplicity; ++m) ks.push_back(r.k);
        return ks;
    }
};

struct SecularScanOptions {
    IndexModel model = IndexModel::ConstantNeff;
    double grid_per_spacing = 10.0;  // grid points per mean Weyl spacing
    double phase_tol = 1e-12;        // eigenphase magnitude at accepted roots
    double dedupe_tol = 1e-9;
};

class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& msg, double suggested)
        : std::runtime_error(msg), suggested_dk(suggested) {}
    double suggested_dk;
};

namespace detail {

inline std::vector<double> sorted_eigenphases(const Matrix& U) {
    Eigen::ComplexEigenSolver<Matrix> es(U, false);
    std::vector<double> ph(U.rows());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < U.rows(); ++i) {
        double a = std::arg(es.eigenvalues()(i));
        if (a < 0.0) a += two_pi;
        ph[i] = a;
    }
    std::sort(ph.begin(), ph.end());
    return ph;
}

/// Number of eigenphases that wrapped past 0 (mod 2pi) between two sorted
/// phase sets, assuming every phase moved up by less than pi. The cyclic
/// order of eigenphases of U_B(k) is preserved because all of them increase
/// monotonically in k.
inline int count_wraps(const std::vector<double>& prev,
                       const std::vector<double>& cur) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const int n = int(prev.size());
    for (int s = 0; s < n; ++s) {
        double maxinc = 0.0;
        bool ok = true;
        int wraps = 0;
        for (int j = 0; j < n && ok; ++j) {
            double inc = cur[(j + s) % n] - prev[j];
            inc -= two_pi * std::floor(inc / two_pi);
            maxinc = std::max(maxinc, inc);
            if (inc >= std::numbers::pi) ok = false;
            if (prev[j] + inc >= two_pi) ++wraps;
        }
        if (ok) return wraps;
    }
    return -1;  // no admissible shift: step too large
}

}  // namespace detail

/// Finds all real roots of the secular condition in [k_min, k_max] by
/// tracking the 2B eigenphases of U_B(k) across a grid and bisecting every
/// zero crossing. The grid is chosen from the Weyl mean spacing; root count
/// is certified against the eigenphase winding number.
inline ResonanceSet closed_spectrum(const Graph& g, const Matrix& sigma,
                                    double k_min, double k_max,
                                    SecularScanOptions opt = {}) {
    if (!(k_max > k_min && k_min > 0.0))
        throw std::domain_error("need k_max > k_min > 0");

    double Lmax = 0.0;
    for (const auto& b : g.bonds) Lmax = std::max(Lmax, b.length_um);
    const double Ltot = g.total_length();
    const double n_hi =
        std::max(g.phase_index(k_min, opt.model), g.phase_index(k_max, opt.model));
    const double mean_spacing = std::numbers::pi / (n_hi * Ltot);
    double dk = mean_spacing / opt.grid_per_spacing;
    // keep per-step eigenphase motion well below the matching limit of pi
    dk = std::min(dk, 0.5 * std::numbers::pi / (n_hi * Lmax));

    auto phases_at = [&](double k) {
        return detail::sorted_eigenphases(
            Vector(phase_diagonal(g, k, opt.model)).asDiagonal() * sigma);
    };

    ResonanceSet out;
    long total_wraps = 0;

    // recursive bracketing: isolate single crossings, then bisect
    struct Frame {
        double a, b;
        std::vector<double> pa, pb;
        int wraps;
    };
    auto refine = [&](double a, double b, const std::vector<double>& pa,
                      const std::vector<double>& pb, int wraps,
                      auto&& self) -> void {
        if (wraps == 0) return;
        if (wraps > 1 && b - a > 1e-12 * std::max(1.0, b)) {
            const double m = 0.5 * (a + b);
            const auto pm = phases_at(m);
            const int wl = detail::count_wraps(pa, pm);
            const int wr = detail::count_wraps(pm, pb);
            if (wl < 0 || wr < 0 || wl + wr != wraps)
                throw ResolutionError("eigenphase tracking inconsistent", dk / 2);
            self(a, m, pa, pm, wl, self);
            self(m, b, pm, pb, wr, self);
            return;
        }
        // single crossing (or an exactly degenerate bunch): bisect on the
        // wrap count of the left half
        double lo = a, hi = b;
        auto plo = pa;
        for (int it = 0; it < 64 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto pm = phases_at(mid);
            const int wl = detail::count_wraps(plo, pm);
            if (wl < 0) throw ResolutionError("bisection step too large", dk / 2);
            if (wl >= 1) {
                hi = mid;
            } else {
                lo = mid;
                plo = pm;
            }
        }
        const double root = 0.5 * (lo + hi);
        const Matrix U =
            Vector(phase_diagonal(g, root, opt.model)).asDiagonal() * sigma;
        const int nn = int(U.rows());
        Eigen::JacobiSVD<Matrix> svd(Matrix::Identity(nn, nn) - U);
        const auto& sv = svd.singularValues();
        int mult = 0;
        for (int i = nn - 1; i >= 0 && sv(i) <= 1e-6; --i) ++mult;
        mult = std::max(mult, 1);
        out.roots.push_back({root, sv(nn - 1), std::max(mult, wraps)});
    };

    auto prev = phases_at(k_min);
    double kprev = k_min;
    const long nsteps = long(std::ceil((k_max - k_min) / dk));
    for (long i = 1; i <= nsteps; ++i) {
        const double k = std::min(k_min + i * dk, k_max);
        auto cur = phases_at(k);
        int wraps = detail::count_wraps(prev, cur);
        if (wraps < 0)
            throw ResolutionError("grid too coarse for eigenphase tracking",
                                  dk / 2);
        total_wraps += wraps;
        refine(kprev, k, prev, cur, wraps, refine);
        prev = std::move(cur);
        kprev = k;
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const ClosedRoot& a, const ClosedRoot& b) { return a.k < b.k; });
    // merge duplicates from degenerate bunches found in adjacent intervals
    ResonanceSet merged;
    for (const auto& r : out.roots) {
        if (!merged.roots.empty() &&
            r.k - merged.roots.back().k < opt.dedupe_tol) {
            auto& last = merged.roots.back();
            last.multiplicity = std::max(last.multiplicity, r.multiplicity);
            last.residual = std::min(last.residual, r.residual);
        } else {
            merged.roots.push_back(r);
        }
    }
    // winding-number completeness certificate
    if (merged.level_count() != total_wraps)
        throw ResolutionError(
            "root count " + std::to_string(merged.level_count()) +
                " does not match winding number " + std::to_string(total_wraps),
            dk / 2);
    return merged;
}

inline ResonanceSet closed_spectrum(const Graph& g, double k_min, double k_max,
                                    SecularScanOptions opt = {}) {
    return closed_spectrum(g, assemble_sigma(g), k_min, k_max, opt);
}

/// Fraction of levels missing relative to the Weyl prediction over a window,
/// clamped to [-0.05, 1].
inline double missing_fraction(int found_levels, double index,
                               double total_length, double k_min,
                               double k_max) {
    const double expected =
        weyl_count(index, total_length, k_max) -
        weyl_count(index, total_length, k_min);
    const double f = 1.0 - double(found_levels) / expected;
    return std::clamp(f, -0.05, 1.0);
}

inline double missing_fraction(const ResonanceSet& found, const Graph& g,
                               double k_min, double k_max) {
    return missing_fraction(found.level_count(), g.n_g, g.total_length(),
                            k_min, k_max);
}

}  // namespace wavegraph
