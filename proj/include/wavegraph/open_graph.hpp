#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "wavegraph/evolution.hpp"
#include "wavegraph/graph.hpp"
#include "wavegraph/spectral.hpp"

namespace wavegraph {

/// A graph opened to a two-lead bus: the chosen bond is split in two halves
/// that attach to an inserted IO coupler. Of its four ports, the pair-A port
/// 0 is the input lead, pair-B port 2 the output lead, and ports 1 and 3
/// carry the two bond halves. The internal scattering matrix is subunitary;
/// the discarded flux exits through the leads.
struct OpenGraph {
    Graph graph;              // internal graph including the IO coupler
    int io_vertex = -1;       // index of the inserted coupler
    int io_bond = -1;         // bond of the closed graph that was split
    double bus_coupling = 0.2;
    double sbend_length_um = 0.0;  // optional k-linear lead phase

    Matrix sigma;   // 2B' x 2B', subunitary
    Vector inject;  // source from the input lead
    Vector out_row; // projection onto the output lead (applied to P(k) A)
    Vector ref_row; // projection back out of the input lead
    Complex direct; // lead-to-lead amplitude through the IO coupler
};

/// Splits bond io_bond of a closed graph at fraction frac and inserts the IO
/// coupler with coupling C_bus. Vertex kinds of the original graph are
/// preserved.
inline OpenGraph open_graph(const Graph& g, int io_bond, double C_bus,
                            double frac = 0.5) {
    validate(g);
    if (io_bond < 0 || io_bond >= int(g.bonds.size()))
        throw std::invalid_argument("io_bond out of range");
    if (C_bus <= 0.0 || C_bus >= 1.0)
        throw std::invalid_argument("bus coupling must lie in (0,1)");
    if (frac <= 0.0 || frac >= 1.0)
        throw std::invalid_argument("split fraction must lie in (0,1)");

    OpenGraph og;
    og.io_bond = io_bond;
    og.bus_coupling = C_bus;
    og.graph = g;
    og.io_vertex = int(g.vertices.size());

    int next_port = 0;
    for (const auto& v : g.vertices)
        for (int p : v.ports) next_port = std::max(next_port, p + 1);
    Vertex io;
    io.id = next_port;  // any unused id
    io.kind = VertexKind::Coupler;
    io.coupling = C_bus;
    io.ports = {next_port, next_port + 1, next_port + 2, next_port + 3};
    og.graph.vertices.push_back(io);

    const Bond split = g.bonds[io_bond];
    og.graph.bonds[io_bond] =
        Bond{split.from_port, io.ports[1], split.length_um * frac};
    og.graph.bonds.push_back(
        Bond{io.ports[3], split.to_port, split.length_um * (1.0 - frac)});

    // assemble the internal scattering matrix directly: ports 0 and 2 of the
    // IO coupler are leads, so the open graph fails closed-graph validation
    const DirectedBondBasis basis(og.graph);
    const int n = basis.size();
    std::vector<Matrix> vmats;
    for (const auto& v : og.graph.vertices) vmats.push_back(vertex_matrix(v));

    og.sigma = Matrix::Zero(n, n);
    og.inject = Vector::Zero(n);
    og.out_row = Vector::Zero(n);
    og.ref_row = Vector::Zero(n);
    const Matrix& sio = vmats[og.io_vertex];
    for (int dp = 0; dp < n; ++dp) {
        const auto [vq, q] = basis.locate(basis.tail_port(dp));
        for (int d = 0; d < n; ++d) {
            const auto [vp, p] = basis.locate(basis.head_port(d));
            if (vp == vq) og.sigma(dp, d) = vmats[vq](q, p);
        }
        if (vq == og.io_vertex) og.inject(dp) = sio(q, 0);
    }
    for (int d = 0; d < n; ++d) {
        const auto [vp, p] = basis.locate(basis.head_port(d));
        if (vp == og.io_vertex) {
            og.out_row(d) = sio(2, p);
            og.ref_row(d) = sio(0, p);
        }
    }
    og.direct = sio(2, 0);
    return og;
}

struct Transmission {
    Complex t;  // lead-in -> lead-out amplitude
    Complex r;  // lead-in -> lead-in amplitude
    double rcond = 1.0;    // reciprocal condition number of I - Sigma P
    bool near_pole = false;
};

/// Steady-state response at real k: solves A = Sigma P(k) A + inject and
/// projects onto the leads. Flags ill conditioning near a resonance pole.
inline Transmission transmission(const OpenGraph& og, double k,
                                 IndexModel model = IndexModel::ConstantNeff,
                                 double rcond_flag = 1e-12) {
    const Vector P = phase_diagonal(og.graph, k, model);
    const int n = int(P.size());
    const Matrix M =
        Matrix::Identity(n, n) - og.sigma * P.asDiagonal();
    Eigen::PartialPivLU<Matrix> lu(M);
    Transmission out;
    out.rcond = lu.rcond();
    out.near_pole = out.rcond < rcond_flag;
    const Vector A = lu.solve(og.inject);
    const Vector PA = P.cwiseProduct(A);
    out.t = og.direct + og.out_row.cwiseProduct(PA).sum();
    out.r = og.ref_row.cwiseProduct(PA).sum();
    if (og.sbend_length_um != 0.0) {
        const Complex lead =
            std::exp(Complex(0.0, og.graph.phase_index(k, model) * k *
                                      og.sbend_length_um));
        out.t *= lead;
        out.r *= lead;
    }
    return out;
}

/// Flux conservation defect |t|^2 + |r|^2 - 1 for a lossless network.
inline double flux_defect(const Transmission& tr) {
    return std::norm(tr.t) + std::norm(tr.r) - 1.0;
}

// ---------------------------------------------------------------------------
// Resonance poles in the complex plane
// ---------------------------------------------------------------------------

struct Pole {
    Complex k;            // Im k < 0 for a decaying resonance
    double gamma = 0.0;   // full width -2 Im k
    double residual = 0.0;
    double closed_k = 0.0;  // the closed-graph root this pole is paired with
    int newton_iterations = 0;
};

namespace detail {

inline Complex phase_index_c(const Graph& g, Complex k, IndexModel model) {
    if (model == IndexModel::ConstantNeff) return g.n_eff;
    const double k0 = 2.0 * std::numbers::pi / g.reference_wavelength_um;
    return g.n_eff + (g.n_g - g.n_eff) * (1.0 - k0 / k);
}

/// det(I - Sigma P(k)) analytically continued to complex k.
inline Complex secular_det(const OpenGraph& og, Complex k, IndexModel model) {
    const Complex nk = phase_index_c(og.graph, k, model) * k;
    const int n = int(og.sigma.rows());
    Vector P(n);
    for (std::size_t b = 0; b < og.graph.bonds.size(); ++b) {
        const Complex ph =
            std::exp(Complex(0.0, 1.0) * nk * og.graph.bonds[b].length_um);
        P(2 * b) = ph;
        P(2 * b + 1) = ph;
    }
    const Matrix M = Matrix::Identity(n, n) - og.sigma * P.asDiagonal();
    return Eigen::PartialPivLU<Matrix>(M).determinant();
}

}  // namespace detail

/// Complex Newton iteration on det(I - Sigma P(k)) seeded at a closed-graph
/// root. Derivative by central difference with step 1e-7 |k|.
inline Pole open_pole(const OpenGraph& og, double seed_k,
                      IndexModel model = IndexModel::ConstantNeff,
                      int max_iter = 50, double tol = 1e-13) {
    Complex k(seed_k, 0.0);
    int it = 0;
    for (; it < max_iter; ++it) {
        const double h = 1e-7 * std::abs(k);
        const Complex f = detail::secular_det(og, k, model);
        const Complex fp = (detail::secular_det(og, k + h, model) -
                            detail::secular_det(og, k - h, model)) /
                           (2.0 * h);
        const Complex dk = f / fp;
        k -= dk;
        if (std::abs(dk) < tol * std::abs(k)) break;
    }
    Pole p;
    p.k = k;
    p.gamma = -2.0 * k.imag();
    p.residual = std::abs(detail::secular_det(og, k, model));
    p.closed_k = seed_k;
    p.newton_iterations = it + 1;
    if (k.imag() > 1e-12 * std::abs(k))
        throw std::runtime_error(
            "pole converged to the upper half plane (Im k > 0): "
            "the open evolution operator is not subunitary");
    return p;
}

/// Poles seeded at every closed-graph root of the window, paired one to one.
inline std::vector<Pole> open_poles(const OpenGraph& og,
                                    const ResonanceSet& closed,
                                    IndexModel model =
                                        IndexModel::ConstantNeff) {
    std::vector<Pole> poles;
    poles.reserve(closed.roots.size());
    for (const auto& r : closed.roots)
        poles.push_back(open_pole(og, r.k, model));
    return poles;
}

/// Analytic decay rate of the all-pass ring of circumference L coupled to a
/// bus with coupling C_bus: Gamma = -ln(1 - C_bus) / (n L).
inline double ring_gamma_analytic(double C_bus, double index, double L) {
    return -std::log(1.0 - C_bus) / (index * L);
}

}  // namespace wavegraph
