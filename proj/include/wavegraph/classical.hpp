#pragma once

#include <algorithm>
#include <queue>

#include <Eigen/Eigenvalues>

#include "wavegraph/evolution.hpp"
#include "wavegraph/graph.hpp"

namespace wavegraph {

/// Classical Perron-Frobenius transition matrix F(d',d) = |Sigma(d',d)|^2.
struct FrobeniusOperator {
    Eigen::MatrixXd F;
};

inline FrobeniusOperator frobenius(const Matrix& sigma) {
    check_unitary(sigma, 1e-10, "Sigma");
    FrobeniusOperator op;
    op.F = sigma.cwiseAbs2();
    return op;
}

/// Evolves a nonnegative bond-occupation distribution m steps: F^m V0.
inline Eigen::VectorXd evolve(const FrobeniusOperator& op,
                              const Eigen::VectorXd& v0, long m) {
    if (m < 0) throw std::domain_error("negative step count");
    if ((v0.array() < 0.0).any())
        throw std::invalid_argument("distribution has negative entries");
    Eigen::VectorXd v = v0;
    for (long i = 0; i < m; ++i) v = op.F * v;
    return v;
}

struct ClassicalClassification {
    std::vector<Complex> eigenvalues;     // sorted by descending modulus
    std::vector<Complex> unimodular_set;  // |lambda| >= 1 - tol
    bool is_ergodic = false;
    bool is_mixing = false;
    double gap = 0.0;  // valid only when is_mixing
};

namespace detail {
/// Connectivity of the undirected bond graph (ergodicity test).
inline bool graph_connected(const Graph& g) {
    const DirectedBondBasis basis(g);
    const int nv = int(g.vertices.size());
    std::vector<std::vector<int>> adj(nv);
    for (const auto& b : g.bonds) {
        const int u = basis.locate(b.from_port).first;
        const int v = basis.locate(b.to_port).first;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(nv, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == nv;
}
}  // namespace detail

/// Full PF spectrum plus ergodic/mixing classification and spectral gap.
/// Unimodularity band 1e-9 on |lambda|.
inline ClassicalClassification classify(const FrobeniusOperator& op,
                                        const Graph& g,
                                        double unimodular_tol = 1e-9) {
    const auto rows = op.F.rowwise().sum();
    const auto cols = op.F.colwise().sum();
    if ((rows.array() - 1.0).abs().maxCoeff() > 1e-10 ||
        (cols.array() - 1.0).abs().maxCoeff() > 1e-10)
        throw std::invalid_argument("F is not bistochastic");

    ClassicalClassification c;
    Eigen::EigenSolver<Eigen::MatrixXd> es(op.F);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        c.eigenvalues.push_back(es.eigenvalues()(i));
    std::sort(c.eigenvalues.begin(), c.eigenvalues.end(),
              [](Complex a, Complex b) {
                  if (std::abs(a) != std::abs(b))
                      return std::abs(a) > std::abs(b);
                  return std::arg(a) < std::arg(b);
              });
    for (const auto& ev : c.eigenvalues)
        if (std::abs(ev) >= 1.0 - unimodular_tol) c.unimodular_set.push_back(ev);

    c.is_ergodic = detail::graph_connected(g);
    c.is_mixing = c.unimodular_set.size() == 1;
    if (c.is_mixing) {
        double second = 0.0;
        // skip the single eigenvalue at 1
        bool skipped = false;
        for (const auto& ev : c.eigenvalues) {
            if (!skipped && std::abs(ev - 1.0) < 1e-6) {
                skipped = true;
                continue;
            }
            second = std::max(second, std::abs(ev));
        }
        c.gap = 1.0 - second;
    }
    return c;
}

inline ClassicalClassification classify(const Graph& g) {
    return classify(frobenius(assemble_sigma(g)), g);
}

}  // namespace wavegraph
