#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wavegraph/graph.hpp"

namespace wavegraph {

/// 4x4 bidirectional-coupler scattering matrix with coupling parameter C.
/// Ports (0,1) and (2,3) form the two pairs; the bar amplitude is
/// sqrt(1-C), the cross amplitude i*sqrt(C).
inline Eigen::Matrix4cd coupler_matrix(double C) {
    const double t = std::sqrt(1.0 - C);
    const Complex c(0.0, std::sqrt(C));
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    s(0, 2) = s(2, 0) = t;
    s(0, 3) = s(3, 0) = c;
    s(1, 2) = s(2, 1) = c;
    s(1, 3) = s(3, 1) = t;
    return s;
}

/// Local scattering matrix of a vertex, d x d with d its degree.
inline Matrix vertex_matrix(const Vertex& v) {
    switch (v.kind) {
        case VertexKind::Coupler:
            return coupler_matrix(v.coupling);
        case VertexKind::Passthrough: {
            Matrix s = Matrix::Zero(2, 2);
            s(0, 1) = s(1, 0) = 1.0;
            return s;
        }
        case VertexKind::Reflector: {
            Matrix s(1, 1);
            s(0, 0) = v.reflection;
            return s;
        }
        case VertexKind::Custom:
            return v.scattering;
    }
    throw std::logic_error("unreachable");
}

inline void check_unitary(const Matrix& m, double tol, const char* what) {
    const double defect =
        (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).norm();
    if (defect > tol)
        throw std::invalid_argument(std::string(what) +
                                    " is not unitary (defect " +
                                    std::to_string(defect) + ")");
}

/// Assembles the k-independent bond scattering matrix Sigma (2B x 2B).
/// Sigma(d', d) is nonzero only when directed bond d arrives at the vertex
/// from which d' departs; the entry is the vertex matrix element between the
/// corresponding local ports.
inline Matrix assemble_sigma(const Graph& g) {
    validate(g);
    const DirectedBondBasis basis(g);
    const int n = basis.size();

    std::vector<Matrix> vmats;
    vmats.reserve(g.vertices.size());
    for (const auto& v : g.vertices) {
        Matrix m = vertex_matrix(v);
        check_unitary(m, 1e-12, "vertex scattering matrix");
        vmats.push_back(std::move(m));
    }

    Matrix sigma = Matrix::Zero(n, n);
    for (int dp = 0; dp < n; ++dp) {
        const auto [vq, q] = basis.locate(basis.tail_port(dp));
        for (int d = 0; d < n; ++d) {
            const auto [vp, p] = basis.locate(basis.head_port(d));
            if (vp == vq) sigma(dp, d) = vmats[vq](q, p);
        }
    }
    return sigma;
}

/// Diagonal of the phase matrix P(k): e^{i n(k) k L_d} per directed bond.
inline Vector phase_diagonal(const Graph& g, double k,
                             IndexModel model = IndexModel::ConstantNeff) {
    if (k <= 0.0) throw std::domain_error("wavenumber must be positive");
    const double n = g.phase_index(k, model);
    Vector p(2 * int(g.bonds.size()));
    for (std::size_t b = 0; b < g.bonds.size(); ++b) {
        const Complex ph =
            std::exp(Complex(0.0, n * k * g.bonds[b].length_um));
        p(2 * b) = ph;
        p(2 * b + 1) = ph;
    }
    return p;
}

struct EvolutionOperator {
    Matrix sigma;   // k-independent
    Vector phases;  // diagonal of P(k)
    double k = 0.0;
    bool open = false;  // subunitary when true

    Matrix matrix() const { return phases.asDiagonal() * sigma; }
};

inline EvolutionOperator evolution_operator(
    const Graph& g, double k, IndexModel model = IndexModel::ConstantNeff) {
    return EvolutionOperator{assemble_sigma(g), phase_diagonal(g, k, model),
                             k, false};
}

inline EvolutionOperator evolution_operator(const Matrix& sigma,
                                            const Graph& g, double k,
                                            IndexModel model =
                                                IndexModel::ConstantNeff) {
    return EvolutionOperator{sigma, phase_diagonal(g, k, model), k, false};
}

// ---------------------------------------------------------------------------
// Eigenmodes
// ---------------------------------------------------------------------------

struct Eigenmode {
    double k = 0.0;
    std::vector<Vector> amplitudes;  // one vector, two if degenerate pair
    std::vector<double> bond_intensity;  // mean |psi|^2 per bond (first mode)
    double residual = 0.0;
    bool degenerate = false;
};

/// Mean of |psi_b(x)|^2 over the bond, in closed form from the directed
/// amplitudes. With A an eigenvector of P(k)Sigma, component 2b is the
/// forward wave at its arrival end and 2b+1 the backward wave at its
/// arrival end; the interference integral is evaluated analytically.
inline std::vector<double> mode_bond_intensities(const Graph& g,
                                                 const Vector& A, double k,
                                                 IndexModel model) {
    const double n = g.phase_index(k, model);
    std::vector<double> I(g.bonds.size());
    for (std::size_t b = 0; b < g.bonds.size(); ++b) {
        const double L = g.bonds[b].length_um;
        const double theta = n * k;
        // plane-wave coefficients in the bond frame x in [0, L]
        const Complex cplus = A(2 * b) * std::exp(Complex(0.0, -theta * L));
        const Complex cminus = A(2 * b + 1);
        const Complex osc =
            (std::exp(Complex(0.0, 2.0 * theta * L)) - 1.0) /
            Complex(0.0, 2.0 * theta * L);
        I[b] = std::norm(cplus) + std::norm(cminus) +
               2.0 * std::real(cplus * std::conj(cminus) * osc);
    }
    return I;
}

/// Extracts the eigenmode at a validated spectral point k_p as the smallest
/// singular direction of I - U_B(k_p). A numerically degenerate pair is
/// returned as an orthonormal basis of the 2-D null space, flagged.
inline Eigenmode eigenmode_at(const Graph& g, const Matrix& sigma, double k_p,
                              IndexModel model = IndexModel::ConstantNeff,
                              double accept_tol = 1e-6,
                              double degenerate_tol = 1e-6) {
    const Vector P = phase_diagonal(g, k_p, model);
    const Matrix U = P.asDiagonal() * sigma;
    const int n = int(U.rows());
    Eigen::JacobiSVD<Matrix> svd(Matrix::Identity(n, n) - U,
                                 Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) > accept_tol)
        throw std::invalid_argument(
            "not a spectral point: smallest singular value " +
            std::to_string(sv(n - 1)));
    Eigenmode mode;
    mode.k = k_p;
    mode.residual = sv(n - 1);
    Vector A = svd.matrixV().col(n - 1);
    A /= A.norm();
    mode.amplitudes.push_back(A);
    if (n >= 2 && sv(n - 2) <= degenerate_tol) {
        mode.degenerate = true;
        Vector A2 = svd.matrixV().col(n - 2);
        A2 -= A.dot(A2) * A;
        A2 /= A2.norm();
        mode.amplitudes.push_back(A2);
    }
    mode.bond_intensity = mode_bond_intensities(g, A, k_p, model);
    return mode;
}

inline Eigenmode eigenmode_at(const Graph& g, double k_p,
                              IndexModel model = IndexModel::ConstantNeff) {
    return eigenmode_at(g, assemble_sigma(g), k_p, model);
}

}  // namespace wavegraph
