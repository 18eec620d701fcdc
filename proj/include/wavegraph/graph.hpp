#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace wavegraph {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kind of scatterer sitting at a vertex. Custom vertices carry an explicit
/// unitary scattering matrix (degree = its dimension).
enum class VertexKind { Coupler, Passthrough, Reflector, Custom };

/// A vertex together with the ordered list of its ports.
/// Coupler port order is (1,2|3,4): ports 0,1 form one pair, ports 2,3 the
/// other, and scattering happens only between the pairs (zero diagonal
/// blocks of the 4x4 matrix).
struct Vertex {
    int id = -1;
    VertexKind kind = VertexKind::Coupler;
    double coupling = 0.5;     // C for couplers
    Complex reflection = 1.0;  // r for reflectors, |r| = 1
    Matrix scattering;         // explicit matrix for custom vertices
    std::vector<int> ports;    // global port ids, in port order
};

struct Bond {
    int from_port = -1;
    int to_port = -1;
    double length_um = 0.0;
};

/// How the phase index n(k) entering P(k) is modelled.
enum class IndexModel { ConstantNeff, LinearDispersion };

struct Graph {
    std::vector<Vertex> vertices;
    std::vector<Bond> bonds;
    double n_eff = 2.4;
    double n_g = 3.97;
    double reference_wavelength_um = 1.55;
    int io_bond = -1;  // bond carrying the bus coupler when opened; optional

    double total_length() const {
        double s = 0.0;
        for (const auto& b : bonds) s += b.length_um;
        return s;
    }

    /// Phase index at wavenumber k for the chosen model. The linear model is
    /// the first-order expansion n(k) = n_eff + (n_g - n_eff)(1 - k0/k)
    /// around the reference wavenumber k0, so that d(n k)/dk = n_g.
    double phase_index(double k, IndexModel model) const {
        if (model == IndexModel::ConstantNeff) return n_eff;
        const double k0 = 2.0 * std::numbers::pi / reference_wavelength_um;
        return n_eff + (n_g - n_eff) * (1.0 - k0 / k);
    }
};

/// Bijective map between (bond, direction) and a flat index in [0, 2B).
/// Direction + (index 2b) runs from the bond's from_port to its to_port,
/// direction - (index 2b+1) the other way.
class DirectedBondBasis {
public:
    explicit DirectedBondBasis(const Graph& g) : graph_(&g) {
        // port -> (vertex index, local port index)
        for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
            const auto& v = g.vertices[vi];
            for (std::size_t pi = 0; pi < v.ports.size(); ++pi) {
                auto [it, fresh] = port_loc_.emplace(
                    v.ports[pi], std::pair<int, int>{int(vi), int(pi)});
                if (!fresh)
                    throw std::invalid_argument(
                        "port " + std::to_string(v.ports[pi]) +
                        " appears on more than one vertex");
            }
        }
        for (const auto& b : g.bonds) {
            if (!port_loc_.count(b.from_port) || !port_loc_.count(b.to_port))
                throw std::invalid_argument("bond references unknown port");
        }
    }

    int size() const { return 2 * int(graph_->bonds.size()); }
    int bond_of(int d) const { return d / 2; }
    int reverse(int d) const { return d ^ 1; }
    double length(int d) const { return graph_->bonds[d / 2].length_um; }

    /// Port the directed bond d ends on (where it arrives).
    int head_port(int d) const {
        const auto& b = graph_->bonds[d / 2];
        return (d & 1) ? b.from_port : b.to_port;
    }
    /// Port the directed bond d starts from.
    int tail_port(int d) const {
        const auto& b = graph_->bonds[d / 2];
        return (d & 1) ? b.to_port : b.from_port;
    }

    std::pair<int, int> locate(int port) const { return port_loc_.at(port); }

    const Graph& graph() const { return *graph_; }

private:
    const Graph* graph_;
    std::map<int, std::pair<int, int>> port_loc_;
};

namespace detail {
inline int expected_degree(const Vertex& v) {
    switch (v.kind) {
        case VertexKind::Coupler: return 4;
        case VertexKind::Passthrough: return 2;
        case VertexKind::Reflector: return 1;
        case VertexKind::Custom: return int(v.scattering.rows());
    }
    return -1;
}
}  // namespace detail

/// Structural validation: every port belongs to exactly one vertex and one
/// bond end, lengths are positive, vertex degrees match their kind.
/// External leads are handled separately by the open-graph builder; a closed
/// graph must have no dangling ports.
inline void validate(const Graph& g) {
    std::map<int, int> port_use;
    for (const auto& v : g.vertices) {
        if (int(v.ports.size()) != detail::expected_degree(v))
            throw std::invalid_argument(
                "vertex " + std::to_string(v.id) + " has " +
                std::to_string(v.ports.size()) + " ports, expected " +
                std::to_string(detail::expected_degree(v)));
        if (v.kind == VertexKind::Custom &&
            v.scattering.rows() != v.scattering.cols())
            throw std::invalid_argument("custom scattering matrix not square");
        if (v.kind == VertexKind::Coupler &&
            (v.coupling < 0.0 || v.coupling > 1.0))
            throw std::invalid_argument("coupling C outside [0,1]");
        if (v.kind == VertexKind::Reflector &&
            std::abs(std::abs(v.reflection) - 1.0) > 1e-12)
            throw std::invalid_argument("reflector with |r| != 1");
        for (int p : v.ports) port_use[p] = 0;
    }
    for (const auto& b : g.bonds) {
        if (b.length_um <= 0.0)
            throw std::invalid_argument("non-positive bond length");
        for (int p : {b.from_port, b.to_port}) {
            auto it = port_use.find(p);
            if (it == port_use.end())
                throw std::invalid_argument("bond references port " +
                                            std::to_string(p) +
                                            " not present on any vertex");
            if (++it->second > 1)
                throw std::invalid_argument("port " + std::to_string(p) +
                                            " used by more than one bond end");
        }
    }
    for (const auto& [p, n] : port_use)
        if (n == 0)
            throw std::invalid_argument("dangling port " + std::to_string(p));
    if (g.bonds.empty()) throw std::invalid_argument("graph has no bonds");
}

/// Pairwise-rational check: returns false (not incommensurate) if any length
/// ratio is a rational p/q with q <= max_denominator to within tol.
inline bool lengths_incommensurate(const std::vector<double>& lengths,
                                   int max_denominator = 50,
                                   double tol = 1e-9) {
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        for (std::size_t j = i + 1; j < lengths.size(); ++j) {
            const double r = lengths[i] / lengths[j];
            for (int q = 1; q <= max_denominator; ++q) {
                const double p = std::round(r * q);
                if (p > 0 && std::abs(r - p / q) < tol) return false;
            }
        }
    }
    return true;
}

inline std::vector<double> bond_lengths(const Graph& g) {
    std::vector<double> L;
    L.reserve(g.bonds.size());
    for (const auto& b : g.bonds) L.push_back(b.length_um);
    return L;
}

// ---------------------------------------------------------------------------
// JSON graph description
// ---------------------------------------------------------------------------

inline Graph graph_from_json(const nlohmann::json& j) {
    Graph g;
    g.n_eff = j.at("n_eff").get<double>();
    g.n_g = j.at("n_g").get<double>();
    g.reference_wavelength_um =
        j.value("reference_wavelength_um", 1.55);
    g.io_bond = j.value("io_bond", -1);
    for (const auto& jv : j.at("vertices")) {
        Vertex v;
        v.id = jv.at("id").get<int>();
        const std::string kind = jv.at("kind").get<std::string>();
        if (kind == "coupler") {
            v.kind = VertexKind::Coupler;
            v.coupling = jv.at("C").get<double>();
        } else if (kind == "passthrough") {
            v.kind = VertexKind::Passthrough;
        } else if (kind == "reflector") {
            v.kind = VertexKind::Reflector;
            v.reflection = jv.value("r", 1.0);
        } else {
            throw std::invalid_argument("unknown vertex kind: " + kind);
        }
        v.ports = jv.at("ports").get<std::vector<int>>();
        g.vertices.push_back(std::move(v));
    }
    for (const auto& jb : j.at("bonds")) {
        Bond b;
        b.from_port = jb.at("from_port").get<int>();
        b.to_port = jb.at("to_port").get<int>();
        b.length_um = jb.at("length_um").get<double>();
        g.bonds.push_back(b);
    }
    validate(g);
    return g;
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    nlohmann::json j;
    in >> j;
    return graph_from_json(j);
}

}  // namespace wavegraph
